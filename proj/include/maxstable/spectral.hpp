#pragma once

// Single-draw spectral operations returning dense field samples. Loops over many
// replicates should build a sampler once (samplers.hpp) and call it repeatedly.

#include <utility>
#include <vector>

#include "maxstable/lattice.hpp"
#include "maxstable/model.hpp"
#include "maxstable/rng.hpp"
#include "maxstable/samplers.hpp"

namespace maxstable {

FieldSample sample_theta(const ThetaSampler& s, Engine& eng);
FieldSample sample_theta(const ModelSpec& m, const Window& w, Engine& eng);

FieldSample sample_br_theta(const Variogram& v, const Window& w, Engine& eng);
FieldSample sample_sequence_theta(const SequenceModel& m, const Window& w, Engine& eng);
FieldSample sample_independent_theta(const Window& w);
FieldSample sample_product_theta(const Product& spec, const Window& w, Engine& eng);
FieldSample sample_alternating_theta(const Window& w);

// max_t c_t^alpha / sum_t c_t^alpha
double exact_sequence_theta(const SequenceModel& m);

FieldSample sample_z(const ZSampler& s, Engine& eng);

// One draw of Z_N on w from the tail field of `tail` and weights p.
FieldSample construct_spectral_from_tail(const ModelSpec& tail,
                                         const std::vector<std::pair<LatticePoint, double>>& weights,
                                         const Window& w, Engine& eng);

// Theta_h = Z / Z(h) carrying the importance weight Z(h)^alpha (weight 0 and an
// all-zero field when Z(h) = 0).
FieldSample tilt_spectral(const ZSampler& z, const LatticePoint& h, double alpha, Engine& eng);
FieldSample tilt_spectral(const ModelSpec& m, const LatticePoint& h, const Window& w, Engine& eng,
                          const SpectralOptions& opt = {});
// Unweighted Theta_h draws by weighted bootstrap from `pool` weighted draws.
std::vector<FieldSample> tilt_spectral_resample(const ModelSpec& m, const LatticePoint& h, const Window& w,
                                                std::size_t count, std::size_t pool, const RngStream& rng,
                                                const SpectralOptions& opt = {});

// Y = R Theta with R alpha-Pareto, alpha taken from the model.
FieldSample sample_Y(const ThetaSampler& s, double alpha, Engine& eng);
FieldSample sample_Y(const ModelSpec& m, const Window& w, Engine& eng);

}  // namespace maxstable
