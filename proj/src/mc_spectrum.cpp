#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <memory>
#include <thread>

#include "antiloc/cbs.hpp"
#include "antiloc/errors.hpp"
#include "cbs_detail.hpp"

namespace antiloc {

namespace {

// Raw moment sums of one block of samples. Blocks are merged in index order
// so the result is independent of how blocks were scheduled.
struct Moments {
  explicit Moments(int n_max)
      : l(n_max + 1), l2(n_max + 1), i(n_max + 1), i2(n_max + 1), li(n_max + 1) {}

  std::uint64_t n = 0;
  std::uint64_t resampled = 0;
  double s = 0, s2 = 0;
  std::vector<double> l, l2, i, i2, li;
  // U = S + L + I, D = S + L summed over orders
  double u = 0, u2 = 0, d = 0, d2 = 0, ud = 0;
  // ladder and crossed totals over orders
  double lt = 0, lt2 = 0, it = 0, it2 = 0;

  void add(const detail::ChainSampleResult& r) {
    ++n;
    resampled += r.resampled;
    s += r.single;
    s2 += r.single * r.single;
    double lsum = 0, isum = 0;
    for (std::size_t k = 2; k < l.size(); ++k) {
      l[k] += r.ladder[k];
      l2[k] += r.ladder[k] * r.ladder[k];
      i[k] += r.interf[k];
      i2[k] += r.interf[k] * r.interf[k];
      li[k] += r.ladder[k] * r.interf[k];
      lsum += r.ladder[k];
      isum += r.interf[k];
    }
    lt += lsum;
    lt2 += lsum * lsum;
    it += isum;
    it2 += isum * isum;
    const double uu = r.single + lsum + isum;
    const double dd = r.single + lsum;
    u += uu;
    u2 += uu * uu;
    d += dd;
    d2 += dd * dd;
    ud += uu * dd;
  }

  void merge(const Moments& o) {
    n += o.n;
    resampled += o.resampled;
    s += o.s;
    s2 += o.s2;
    for (std::size_t k = 0; k < l.size(); ++k) {
      l[k] += o.l[k];
      l2[k] += o.l2[k];
      i[k] += o.i[k];
      i2[k] += o.i2[k];
      li[k] += o.li[k];
    }
    u += o.u;
    u2 += o.u2;
    d += o.d;
    d2 += o.d2;
    ud += o.ud;
    lt += o.lt;
    lt2 += o.lt2;
    it += o.it;
    it2 += o.it2;
  }
};

double stderr_of_mean(double sum, double sum2, std::uint64_t n) {
  if (n < 2) return 0.0;
  const double nn = static_cast<double>(n);
  const double mean = sum / nn;
  const double var = std::max(0.0, (sum2 / nn - mean * mean) * nn / (nn - 1.0));
  return std::sqrt(var / nn);
}

// Delta-method error of the ratio of means sum_a / sum_b.
double stderr_of_ratio(double a, double a2, double b, double b2, double ab, std::uint64_t n) {
  if (n < 2 || b == 0.0) return std::numeric_limits<double>::quiet_NaN();
  const double nn = static_cast<double>(n);
  const double ma = a / nn, mb = b / nn;
  const double r = ma / mb;
  const double var_a = a2 / nn - ma * ma;
  const double var_b = b2 / nn - mb * mb;
  const double cov = ab / nn - ma * mb;
  const double var = std::max(0.0, (var_a - 2.0 * r * cov + r * r * var_b) * nn / (nn - 1.0));
  return std::sqrt(var / nn) / std::abs(mb);
}

SpectrumRecord finish(const CbsEvaluator& ev, const Moments& m) {
  SpectrumRecord rec;
  const double nn = static_cast<double>(m.n);
  rec.delta = ev.delta();
  rec.n0 = ev.n0();
  rec.samples = m.n;
  rec.resampled_paths = m.resampled;
  rec.sigma_single = m.s / nn;
  rec.stderr_single = stderr_of_mean(m.s, m.s2, m.n);

  const std::size_t orders = m.l.size();
  rec.ladder_by_order.assign(orders, 0.0);
  rec.interf_by_order.assign(orders, 0.0);
  rec.stderr_ladder_by_order.assign(orders, 0.0);
  rec.stderr_interf_by_order.assign(orders, 0.0);
  for (std::size_t k = 2; k < orders; ++k) {
    rec.ladder_by_order[k] = m.l[k] / nn;
    rec.interf_by_order[k] = m.i[k] / nn;
    rec.stderr_ladder_by_order[k] = stderr_of_mean(m.l[k], m.l2[k], m.n);
    rec.stderr_interf_by_order[k] = stderr_of_mean(m.i[k], m.i2[k], m.n);
    rec.sigma_ladder += rec.ladder_by_order[k];
    rec.sigma_interf += rec.interf_by_order[k];
  }
  rec.stderr_ladder = stderr_of_mean(m.lt, m.lt2, m.n);
  rec.stderr_interf = stderr_of_mean(m.it, m.it2, m.n);

  rec.X_EF = m.u / m.d;
  rec.stderr_X_EF = stderr_of_ratio(m.u, m.u2, m.d, m.d2, m.ud, m.n);
  if (orders > 2 && m.l[2] != 0.0) {
    rec.R2 = m.i[2] / m.l[2];
    rec.stderr_R2 = stderr_of_ratio(m.i[2], m.i2[2], m.l[2], m.l2[2], m.li[2], m.n);
  } else {
    rec.R2 = std::numeric_limits<double>::quiet_NaN();
    rec.stderr_R2 = std::numeric_limits<double>::quiet_NaN();
  }
  return rec;
}

}  // namespace

bool SpectrumRecord::invariants_hold() const {
  if (!(sigma_single >= 0.0) || !(sigma_ladder >= 0.0)) return false;
  for (std::size_t k = 2; k < ladder_by_order.size(); ++k) {
    if (ladder_by_order[k] < 0.0) return false;
    if (std::abs(interf_by_order[k]) > ladder_by_order[k] * (1.0 + 1e-12)) return false;
  }
  if (sigma_single + sigma_ladder > 0.0) {
    const double x = (sigma_single + sigma_ladder + sigma_interf) / (sigma_single + sigma_ladder);
    if (std::abs(x - X_EF) > 1e-9 * std::max(1.0, std::abs(x))) return false;
  }
  return true;
}

std::vector<SpectrumRecord> mc_spectrum(const ChannelSpec& channel, const LevelScheme& scheme,
                                        const CloudConfig& cloud, std::span<const double> deltas,
                                        const McSettings& settings) {
  if (deltas.empty()) throw ConfigError("detuning list is empty");
  if (settings.n_samples < 1) throw ConfigError("n_samples must be >= 1");
  if (settings.n_max_order < 1) throw ConfigError("n_max_order must be >= 1");
  if (settings.n_max_order > 12) throw ConfigError("n_max_order above 12 is not supported");
  if (settings.block_size < 1) throw ConfigError("block_size must be >= 1");

  const ScatteringModel model(scheme);
  std::vector<std::unique_ptr<CbsEvaluator>> evaluators;
  for (double d : deltas)
    evaluators.push_back(
        std::make_unique<CbsEvaluator>(model, cloud, channel, d, settings.options));

  const std::uint64_t blocks_per_delta =
      (settings.n_samples + settings.block_size - 1) / settings.block_size;
  const std::uint64_t total_items = blocks_per_delta * deltas.size();
  const int n_max = settings.n_max_order;
  std::vector<Moments> results(total_items, Moments(n_max));

  std::atomic<std::uint64_t> next{0};
  auto worker = [&] {
    detail::ChainSampleResult sample;
    sample.ladder.assign(static_cast<std::size_t>(n_max + 1), 0.0);
    sample.interf.assign(static_cast<std::size_t>(n_max + 1), 0.0);
    for (;;) {
      const std::uint64_t item = next.fetch_add(1);
      if (item >= total_items) return;
      const std::uint64_t di = item / blocks_per_delta;
      const std::uint64_t bi = item % blocks_per_delta;
      const std::uint64_t begin = bi * settings.block_size;
      const std::uint64_t end = std::min(settings.n_samples, begin + settings.block_size);
      Rng rng({settings.seed, di, bi});
      Moments& m = results[item];
      const CbsEvaluator& ev = *evaluators[di];
      for (std::uint64_t s = begin; s < end; ++s) {
        detail::sample_chain(ev, n_max, rng, sample);
        m.add(sample);
      }
    }
  };

  unsigned threads = settings.threads == 0 ? std::thread::hardware_concurrency() : settings.threads;
  threads = std::max(1u, threads);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  std::vector<SpectrumRecord> out;
  for (std::size_t di = 0; di < deltas.size(); ++di) {
    Moments total(n_max);
    for (std::uint64_t bi = 0; bi < blocks_per_delta; ++bi)
      total.merge(results[di * blocks_per_delta + bi]);
    out.push_back(finish(*evaluators[di], total));
  }
  return out;
}

XefMinimum xef_minimum(std::span<const SpectrumRecord> records) {
  if (records.empty()) throw std::invalid_argument("no spectrum records");
  XefMinimum best{records[0].delta, records[0].X_EF, 0};
  for (std::size_t i = 1; i < records.size(); ++i)
    if (records[i].X_EF < best.xef) best = {records[i].delta, records[i].X_EF, i};
  return best;
}

}  // namespace antiloc
