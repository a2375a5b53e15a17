#pragma once

// Sampler objects behind the spectral operations. A ThetaSampler draws the
// spectral tail field on a translate of a fixed host box; a ZSampler draws a
// spectral field on a fixed window. Draws are const and thread-safe.

#include <memory>
#include <optional>
#include <vector>

#include "maxstable/lattice.hpp"
#include "maxstable/model.hpp"
#include "maxstable/rng.hpp"

namespace maxstable {

class ThetaSampler {
 public:
  explicit ThetaSampler(Window host) : host_(std::move(host)) {}
  virtual ~ThetaSampler() = default;

  const Window& host() const { return host_; }
  int dim() const { return host_.dim(); }

  // Non-zero values of Theta on host - shift, ascending lexicographic.
  // shift must lie in the host so that the window holds the origin.
  virtual void draw(Engine& eng, const LatticePoint& shift, std::vector<Entry>& out) const = 0;
  // Theta on the host itself (which must contain the origin).
  void draw(Engine& eng, std::vector<Entry>& out) const;

 protected:
  void check_shift(const LatticePoint& shift) const;

 private:
  Window host_;
};

std::unique_ptr<ThetaSampler> make_theta_sampler(const ModelSpec& m, const Window& host);

class ZSampler {
 public:
  explicit ZSampler(Window w) : window_(std::move(w)) {}
  virtual ~ZSampler() = default;

  const Window& window() const { return window_; }
  // Non-zero values of Z on the window, ascending lexicographic.
  virtual void draw(Engine& eng, std::vector<Entry>& out) const = 0;
  // Almost-sure bound on max_t Z(t), when one is known.
  virtual std::optional<double> sup_bound() const { return std::nullopt; }

 private:
  Window window_;
};

struct SpectralOptions {
  enum class Construction { tail, native };
  Construction construction = Construction::tail;
  // Support box of the uniform weights is the window expanded by this many
  // points per side; negative means the largest side length of the window.
  LatticePoint::Coord margin = -1;
  // Native Brown-Resnick only: Z(root) = 1. Defaults to the window's lower corner.
  std::optional<LatticePoint> root;
};

/// Z_N(t) = Theta(t - N) p_N^{-1/alpha} 1(N is the first maximiser of
/// p_i Theta(i - N)^alpha over the weight support), N drawn with law p.
class TailSpectralSampler : public ZSampler {
 public:
  // Uniform weights on `support`, which must contain w.
  TailSpectralSampler(const ModelSpec& tail, Window w, Window support);
  // Explicit positive weights (renormalised); their bounding box must contain w.
  TailSpectralSampler(const ModelSpec& tail, Window w,
                      const std::vector<std::pair<LatticePoint, double>>& weights);

  void draw(Engine& eng, std::vector<Entry>& out) const override;
  std::optional<double> sup_bound() const override { return bound_; }

  const Window& support() const { return support_; }
  // N and the Theta draw behind the last call are not kept; this variant exposes them.
  void draw_with_index(Engine& eng, std::vector<Entry>& out, LatticePoint& n) const;

 private:
  Window support_;
  double alpha_ = 1.0;
  std::vector<double> weights_;     // dense over support_, empty when uniform
  std::vector<double> cumulative_;  // running sums of weights_
  double bound_ = 0.0;
  std::unique_ptr<ThetaSampler> theta_;
};

/// Brown-Resnick Z(t) = exp(W(t) - W(root) - gamma(t - root)/2)^{1/alpha}.
class NativeBrownResnickSampler : public ZSampler {
 public:
  NativeBrownResnickSampler(const BrownResnick& m, Window w, LatticePoint root);
  void draw(Engine& eng, std::vector<Entry>& out) const override;

 private:
  LatticePoint root_;
  std::unique_ptr<ThetaSampler> theta_;
};

Window default_support(const Window& w, LatticePoint::Coord margin);

std::unique_ptr<ZSampler> make_z_sampler(const ModelSpec& m, const Window& w,
                                         const SpectralOptions& opt = {});

}  // namespace maxstable
