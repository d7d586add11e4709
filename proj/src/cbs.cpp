#include "antiloc/cbs.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/SVD>

#include "antiloc/errors.hpp"
#include "cbs_detail.hpp"

namespace antiloc {

namespace {

constexpr int kCachedOrders = 12;

void compositions(int remaining, int parts_left, int max_part, Routing& cur,
                  std::vector<Routing>& out) {
  if (parts_left == 0) {
    if (remaining == 0) out.push_back(cur);
    return;
  }
  for (int p = 0; p <= std::min(remaining, max_part); ++p) {
    cur.push_back(p);
    compositions(remaining - p, parts_left - 1, max_part, cur, out);
    cur.pop_back();
  }
}

}  // namespace

// --- channel -----------------------------------------------------------------

ChannelSpec ChannelSpec::helicity_preserving(const LevelScheme& scheme, DiagramSet set) {
  ChannelSpec c;
  const HalfInt F0 = scheme.populated_ground;
  c.final_m = F0.twice() >= 2 ? -F0 + HalfInt(2) : -F0;
  c.diagram_set = set;
  return c;
}

void ChannelSpec::validate(const LevelScheme& scheme) const {
  if (pol_in != 1 && pol_in != -1) throw ConfigError("pol_in must be +1 or -1");
  if (pol_out != 1 && pol_out != -1) throw ConfigError("pol_out must be +1 or -1");
  if (!valid_projection(scheme.populated_ground, final_m))
    throw ConfigError("final_m=" + final_m.str() + " is not a sublevel of F0=" +
                      scheme.populated_ground.str());
}

int ChannelSpec::transfer(const LevelScheme& scheme) const {
  return (final_m + scheme.populated_ground).twice() / 2;
}

ScatteringPath ScatteringPath::reversed() const {
  ScatteringPath p;
  p.atoms.assign(atoms.rbegin(), atoms.rend());
  p.m_out.assign(m_out.rbegin(), m_out.rend());
  return p;
}

double angular_factor_sigma(double theta) {
  const double c = std::cos(theta);
  const double v = c * c + 1.0;
  return 0.25 * v * v;
}

double angular_factor_pi(double theta) {
  const double s = std::sin(theta);
  return s * s * s * s;
}

std::vector<Routing> channel_routings(const LevelScheme& scheme, const ChannelSpec& channel,
                                      int order, DiagramSet set) {
  const HalfInt F0 = scheme.populated_ground;
  const int transfer = channel.transfer(scheme);
  const int max_part = std::min(2, F0.twice());
  std::vector<Routing> all;
  Routing cur;
  compositions(transfer, order, max_part, cur, all);

  const double target = zeeman_energy(scheme, F0, channel.final_m);
  const double tol = 1e-12 * (1.0 + std::abs(target));
  std::vector<Routing> out;
  for (auto& r : all) {
    const auto nonzero = std::count_if(r.begin(), r.end(), [](int p) { return p != 0; });
    if (set == DiagramSet::SigmaOnly && nonzero > 1) continue;
    double e = 0.0;
    for (int p : r) e += zeeman_energy(scheme, F0, -F0 + HalfInt(p));
    if (std::abs(e - target) > tol) continue;
    out.push_back(std::move(r));
  }
  return out;
}

// --- evaluator -----------------------------------------------------------------

namespace {

/// External and link factors of a chain, computed once and shared by every
/// routing and both orderings.
class ChainCache {
 public:
  explicit ChainCache(const CbsEvaluator& ev) : ev_(ev) {}

  void push(const Vec3& r) {
    const auto& ch = ev_.channel();
    const auto& med = ev_.medium();
    const complex phase = std::exp(complex(0, r.z()));
    const complex out_phase = ev_.options().flip_outgoing_phase ? std::conj(phase) : phase;
    in_.push_back(med.external(r, ch.pol_in) * phase);
    out_.push_back(med.external(r, -ch.pol_out) * out_phase);
    if (!pos_.empty()) {
      const Vec3 d = r - pos_.back();
      const double s = d.norm();
      if (s < ev_.options().r_min)
        throw DegeneratePath("scatterers closer than r_min: " + std::to_string(s));
      dir_.push_back(d / s);
      link_.push_back(std::exp(complex(0, s)) / s * med.interatomic(pos_.back(), r));
    }
    pos_.push_back(r);
  }

  std::size_t size() const { return pos_.size(); }

  // Amplitude over the first n atoms; routing indexed by atom.
  complex amplitude(std::size_t n, std::span<const int> routing, bool reversed,
                    const CVec3& e_in, const CVec3& e_out) const {
    if (!reversed) {
      CVec3 v = ev_.tensor(routing[0]) * (e_in * in_[0]);
      for (std::size_t i = 1; i < n; ++i) {
        const Vec3& u = dir_[i - 1];
        v = (v - u.cast<complex>() * u.cast<complex>().dot(v)) * link_[i - 1];
        v = ev_.tensor(routing[i]) * v;
      }
      return e_out.dot(v) * out_[n - 1];
    }
    CVec3 v = ev_.tensor(routing[n - 1]) * (e_in * in_[n - 1]);
    for (std::size_t i = n - 1; i > 0; --i) {
      const Vec3& u = dir_[i - 1];
      v = (v - u.cast<complex>() * u.cast<complex>().dot(v)) * link_[i - 1];
      v = ev_.tensor(routing[i - 1]) * v;
    }
    return e_out.dot(v) * out_[0];
  }

  PairTerms terms(std::size_t n, std::span<const Routing> routings, const CVec3& e_in,
                  const CVec3& e_out) const {
    PairTerms t;
    for (const auto& r : routings) {
      const complex ad = amplitude(n, r, false, e_in, e_out);
      const complex ar = amplitude(n, r, true, e_in, e_out);
      t.ladder += std::norm(ad) + std::norm(ar);
      t.interf += 2.0 * (ad * std::conj(ar)).real();
    }
    return t;
  }

  const Vec3& position(std::size_t i) const { return pos_[i]; }

 private:
  const CbsEvaluator& ev_;
  std::vector<Vec3> pos_;
  std::vector<complex> in_;
  std::vector<complex> out_;
  std::vector<Vec3> dir_;
  std::vector<complex> link_;
};

}  // namespace

CbsEvaluator::CbsEvaluator(const ScatteringModel& model, const CloudConfig& cloud,
                           const ChannelSpec& channel, double delta, const CbsOptions& options)
    : CbsEvaluator(model, cloud, channel, delta,
                   calibrate_density(cloud, model, delta, channel.pol_in), options) {}

CbsEvaluator::CbsEvaluator(const ScatteringModel& model, const CloudConfig& cloud,
                           const ChannelSpec& channel, double delta, double n0,
                           const CbsOptions& options)
    : model_(model),
      cloud_(cloud),
      channel_(channel),
      delta_(delta),
      options_(options),
      medium_(cloud, model, delta, n0,
              {options.external_attenuation, options.interatomic_attenuation}) {
  init();
}

void CbsEvaluator::init() {
  const LevelScheme& scheme = model_.scheme();
  channel_.validate(scheme);
  cloud_.validate();
  cloud_.peak_density = medium_.n0();
  transfer_ = channel_.transfer(scheme);
  const HalfInt m0 = model_.stretched();
  for (int dm = 0; dm <= 2; ++dm) {
    const HalfInt m = m0 + HalfInt(dm);
    tensors_.push_back(valid_projection(model_.ground(), m)
                           ? CMat3(model_.scale() * model_.tensor(m0, m, delta_))
                           : CMat3(CMat3::Zero()));
  }
  routings_.resize(kCachedOrders + 1);
  for (int n = 1; n <= kCachedOrders; ++n)
    routings_[static_cast<std::size_t>(n)] =
        channel_routings(scheme, channel_, n, channel_.diagram_set);
  e_in_ = spherical_unit(channel_.pol_in);
  e_out_ = spherical_unit(-channel_.pol_out);
}

const CMat3& CbsEvaluator::tensor(int dm) const {
  return tensors_.at(static_cast<std::size_t>(dm));
}

const std::vector<Routing>& CbsEvaluator::routings(int order) const {
  if (order < 1 || order > kCachedOrders)
    throw std::out_of_range("scattering order outside cached range");
  return routings_[static_cast<std::size_t>(order)];
}

complex CbsEvaluator::path_amplitude(std::span<const Vec3> atoms, std::span<const int> routing,
                                     bool reversed) const {
  if (atoms.empty() || atoms.size() != routing.size())
    throw std::invalid_argument("path needs one routing entry per atom");
  ChainCache cache(*this);
  for (const auto& r : atoms) cache.push(r);
  return cache.amplitude(atoms.size(), routing, reversed, e_in_, e_out_);
}

complex CbsEvaluator::path_amplitude(const ScatteringPath& path) const {
  Routing routing;
  for (const auto& m : path.m_out) routing.push_back((m - model_.stretched()).twice() / 2);
  return path_amplitude(path.atoms, routing, false);
}

double CbsEvaluator::path_amplitude_bound(std::span<const Vec3> atoms,
                                          std::span<const int> routing) const {
  if (atoms.empty() || atoms.size() != routing.size())
    throw std::invalid_argument("path needs one routing entry per atom");
  double b = 1.0;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    b *= tensor(routing[i]).jacobiSvd().singularValues()(0);
    if (i > 0)
      b *= std::abs(medium_.interatomic(atoms[i - 1], atoms[i])) / (atoms[i] - atoms[i - 1]).norm();
  }
  const auto ext = [&](const Vec3& in, const Vec3& out) {
    return std::abs(medium_.external(in, channel_.pol_in)) *
           std::abs(medium_.external(out, -channel_.pol_out));
  };
  return b * std::max(ext(atoms.front(), atoms.back()), ext(atoms.back(), atoms.front()));
}

complex CbsEvaluator::single_amplitude(const Vec3& r) const {
  if (transfer_ > 2 || routings(1).empty()) return 0.0;
  const complex phase = std::exp(complex(0, 2.0 * r.z()));
  return e_out_.dot(tensor(transfer_) * e_in_) * medium_.external(r, channel_.pol_in) *
         medium_.external(r, -channel_.pol_out) * phase;
}

PairTerms CbsEvaluator::pair_contribution(const Vec3& r1, const Vec3& r2) const {
  return pair_contribution(r1, r2, routings(2));
}

PairTerms CbsEvaluator::pair_contribution(const Vec3& r1, const Vec3& r2,
                                          std::span<const Routing> routings) const {
  const Vec3 atoms[2] = {r1, r2};
  return chain_contribution(atoms, routings);
}

PairTerms CbsEvaluator::chain_contribution(std::span<const Vec3> atoms,
                                           std::span<const Routing> routings) const {
  ChainCache cache(*this);
  for (const auto& r : atoms) cache.push(r);
  return cache.terms(atoms.size(), routings, e_in_, e_out_);
}

complex path_amplitude(const ScatteringPath& path, const ChannelSpec& channel,
                       const LevelScheme& scheme, const CloudConfig& cloud, double n0,
                       double delta, const CbsOptions& options) {
  const CbsEvaluator ev(ScatteringModel(scheme), cloud, channel, delta, n0, options);
  return ev.path_amplitude(path);
}

PairTerms pair_contribution(const Vec3& r1, const Vec3& r2, const ChannelSpec& channel,
                            const LevelScheme& scheme, const CloudConfig& cloud, double n0,
                            double delta, const CbsOptions& options) {
  const CbsEvaluator ev(ScatteringModel(scheme), cloud, channel, delta, n0, options);
  return ev.pair_contribution(r1, r2);
}

namespace detail {

void sample_chain(const CbsEvaluator& ev, int n_max, Rng& rng, ChainSampleResult& out) {
  const double N = ev.atom_number();
  const double r_min = ev.options().r_min;
  const CVec3 e_in = spherical_unit(ev.channel().pol_in);
  const CVec3 e_out = spherical_unit(-ev.channel().pol_out);

  std::fill(out.ladder.begin(), out.ladder.end(), 0.0);
  std::fill(out.interf.begin(), out.interf.end(), 0.0);
  out.resampled = 0;

  ChainCache cache(ev);
  const Vec3 r1 = sample_position(ev.cloud(), rng);
  out.single = N * std::norm(ev.single_amplitude(r1));
  if (n_max < 2) return;
  cache.push(r1);

  double weight = N;
  for (int k = 2; k <= n_max; ++k) {
    RayStep step;
    for (int attempt = 0;; ++attempt) {
      step = sample_ray_step(ev.cloud(), cache.position(cache.size() - 1), r_min, rng);
      bool clash = false;
      for (std::size_t j = 0; j + 1 < cache.size(); ++j)
        if ((step.position - cache.position(j)).norm() < r_min) clash = true;
      if (!clash) break;
      ++out.resampled;
      if (attempt > 1000) throw DegeneratePath("could not place a non-recurrent scatterer");
    }
    weight *= N * 4.0 * kPi * step.distance * step.distance * step.column;
    if (weight == 0.0) return;
    cache.push(step.position);

    const auto& all = ev.routings(k);
    if (all.empty()) continue;
    PairTerms t;
    double multiplicity = 1.0;
    if (k <= ev.options().enumerate_max_order) {
      t = cache.terms(cache.size(), all, e_in, e_out);
    } else {
      const auto pick = rng.below(all.size());
      t = cache.terms(cache.size(), std::span<const Routing>(&all[pick], 1), e_in, e_out);
      multiplicity = static_cast<double>(all.size());
    }
    out.ladder[static_cast<std::size_t>(k)] = 0.5 * weight * multiplicity * t.ladder;
    out.interf[static_cast<std::size_t>(k)] = 0.5 * weight * multiplicity * t.interf;
  }
}

}  // namespace detail

}  // namespace antiloc
