#include "maxstable/spectral.hpp"

#include <algorithm>
#include <cmath>

namespace maxstable {

FieldSample sample_theta(const ThetaSampler& s, Engine& eng) {
  std::vector<Entry> e;
  s.draw(eng, e);
  return to_dense(e, s.host(), FieldTag::Theta);
}

FieldSample sample_theta(const ModelSpec& m, const Window& w, Engine& eng) {
  return sample_theta(*make_theta_sampler(m, w), eng);
}

FieldSample sample_br_theta(const Variogram& v, const Window& w, Engine& eng) {
  return sample_theta(ModelSpec{BrownResnick{v}}, w, eng);
}

FieldSample sample_sequence_theta(const SequenceModel& m, const Window& w, Engine& eng) {
  m.validate();
  return sample_theta(ModelSpec{m}, w, eng);
}

FieldSample sample_independent_theta(const Window& w) {
  Engine unused;
  return sample_theta(ModelSpec{Independent{w.dim()}}, w, unused);
}

FieldSample sample_product_theta(const Product& spec, const Window& w, Engine& eng) {
  const ModelSpec m{spec};
  validate_model(m);
  return sample_theta(m, w, eng);
}

FieldSample sample_alternating_theta(const Window& w) {
  Engine unused;
  return sample_theta(ModelSpec{Alternating{}}, w, unused);
}

double exact_sequence_theta(const SequenceModel& m) {
  m.validate();
  double top = 0.0;
  for (const auto& [_, c] : m.coeffs) top = std::max(top, std::pow(c, m.alpha));
  return top / m.total();
}

FieldSample sample_z(const ZSampler& s, Engine& eng) {
  std::vector<Entry> e;
  s.draw(eng, e);
  return to_dense(e, s.window(), FieldTag::Z);
}

FieldSample construct_spectral_from_tail(const ModelSpec& tail,
                                         const std::vector<std::pair<LatticePoint, double>>& weights,
                                         const Window& w, Engine& eng) {
  return sample_z(TailSpectralSampler(tail, w, weights), eng);
}

FieldSample tilt_spectral(const ZSampler& z, const LatticePoint& h, double alpha, Engine& eng) {
  if (!z.window().contains(h)) throw UsageError("tilt point " + h.to_string() + " lies outside the window");
  FieldSample f = sample_z(z, eng);
  const double zh = f.at(h);
  if (zh > 0.0) {
    f = f.scaled(1.0 / zh);
    f.at(h) = 1.0;
    f.set_weight(std::pow(zh, alpha));
  } else {
    f = f.scaled(0.0);
    f.set_weight(0.0);
  }
  f.set_tag(FieldTag::Theta);
  return f;
}

FieldSample tilt_spectral(const ModelSpec& m, const LatticePoint& h, const Window& w, Engine& eng,
                          const SpectralOptions& opt) {
  return tilt_spectral(*make_z_sampler(m, w, opt), h, model_alpha(m), eng);
}

std::vector<FieldSample> tilt_spectral_resample(const ModelSpec& m, const LatticePoint& h, const Window& w,
                                                std::size_t count, std::size_t pool, const RngStream& rng,
                                                const SpectralOptions& opt) {
  if (pool == 0) throw UsageError("resampling pool must be non-empty");
  const auto z = make_z_sampler(m, w, opt);
  const double alpha = model_alpha(m);
  Engine eng = rng.child(0).engine();
  std::vector<FieldSample> drawn;
  std::vector<double> cumulative;
  double acc = 0.0;
  for (std::size_t k = 0; k < pool; ++k) {
    drawn.push_back(tilt_spectral(*z, h, alpha, eng));
    acc += *drawn.back().weight();
    cumulative.push_back(acc);
  }
  if (!(acc > 0.0)) throw ModelError("every tilted draw has weight 0; enlarge the pool");
  Engine pick = rng.child(1).engine();
  std::vector<FieldSample> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    const double u = uniform01(pick) * acc;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    std::size_t idx = std::min<std::size_t>(static_cast<std::size_t>(it - cumulative.begin()), pool - 1);
    while (*drawn[idx].weight() == 0.0) --idx;
    out.push_back(drawn[idx]);
    out.back().set_weight(std::nullopt);
  }
  return out;
}

FieldSample sample_Y(const ThetaSampler& s, double alpha, Engine& eng) {
  std::vector<Entry> e;
  s.draw(eng, e);
  const double r = pareto(eng, alpha);
  for (auto& x : e) x.value *= r;
  return to_dense(e, s.host(), FieldTag::Y);
}

FieldSample sample_Y(const ModelSpec& m, const Window& w, Engine& eng) {
  return sample_Y(*make_theta_sampler(m, w), model_alpha(m), eng);
}

}  // namespace maxstable
