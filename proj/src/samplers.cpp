#include "maxstable/samplers.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace maxstable {

void ThetaSampler::draw(Engine& eng, std::vector<Entry>& out) const {
  draw(eng, LatticePoint::origin(dim()), out);
}

void ThetaSampler::check_shift(const LatticePoint& shift) const {
  if (!host_.contains(shift)) {
    throw UsageError("window " + host_.translated(-shift).to_string() + " does not contain the origin");
  }
}

namespace {

void require_host_dim(const ModelSpec& m, const Window& host) {
  if (model_dim(m) != host.dim()) {
    throw UsageError(model_name(m) + " model has dimension " + std::to_string(model_dim(m)) +
                     " but the window has dimension " + std::to_string(host.dim()));
  }
}

// Theta(j) = exp(G(j + N) - G(N) - gamma(j)/2)^{1/alpha} with G a Gaussian field
// with stationary increments on the host, pinned at its centre.
class BrownResnickTheta final : public ThetaSampler {
 public:
  BrownResnickTheta(const BrownResnick& m, const Window& host)
      : ThetaSampler(host), alpha_(m.alpha), diff_(host.difference(host)) {
    gamma_.resize(diff_.size());
    for (std::size_t k = 0; k < diff_.size(); ++k) gamma_[k] = m.variogram(diff_.point(k));

    LatticePoint centre(host.dim());
    for (int j = 0; j < host.dim(); ++j) centre[j] = host.lower()[j] + (host.extent(j) - 1) / 2;
    pin_ = host.index(centre);

    const std::size_t n = host.size() - 1;
    std::vector<LatticePoint> pts;
    for (std::size_t k = 0; k < host.size(); ++k) {
      if (k != pin_) pts.push_back(host.point(k));
    }
    Eigen::MatrixXd cov(n, n);
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b <= a; ++b) {
        const double c = 0.5 * (gam(pts[a] - centre) + gam(pts[b] - centre) - gam(pts[a] - pts[b]));
        cov(a, b) = c;
        cov(b, a) = c;
      }
    }
    factor(cov);
  }

  void draw(Engine& eng, const LatticePoint& shift, std::vector<Entry>& out) const override {
    check_shift(shift);
    const Window& h = host();
    const std::size_t n = h.size() - 1;
    std::normal_distribution<double> normal;
    Eigen::VectorXd xi(static_cast<Eigen::Index>(n));
    for (std::size_t k = 0; k < n; ++k) xi[static_cast<Eigen::Index>(k)] = normal(eng);
    const Eigen::VectorXd g = chol_.triangularView<Eigen::Lower>() * xi;
    auto field = [&](std::size_t k) -> double {
      if (k == pin_) return 0.0;
      return g[static_cast<Eigen::Index>(k < pin_ ? k : k - 1)];
    };
    const double g_shift = field(h.index(shift));
    out.clear();
    out.reserve(h.size());
    for (std::size_t k = 0; k < h.size(); ++k) {
      const LatticePoint j = h.point(k) - shift;
      double v = field(k) - g_shift - 0.5 * gam(j);
      if (alpha_ != 1.0) v /= alpha_;
      out.push_back({j, j.is_origin() ? 1.0 : std::exp(v)});
    }
  }

 private:
  double gam(const LatticePoint& d) const { return gamma_[diff_.index(d)]; }

  void factor(const Eigen::MatrixXd& cov) {
    if (cov.rows() == 0) return;
    for (double jitter = 0.0;;) {
      Eigen::MatrixXd c = cov;
      c.diagonal().array() += jitter;
      Eigen::LLT<Eigen::MatrixXd> llt(c);
      if (llt.info() == Eigen::Success && llt.matrixL().toDenseMatrix().diagonal().minCoeff() > 0.0) {
        chol_ = llt.matrixL();
        jitter_ = jitter;
        return;
      }
      jitter = jitter == 0.0 ? 1e-10 : jitter * 10.0;
      if (jitter > 1e-6 * 1.0000001) {
        throw ModelError("variogram does not give a positive semi-definite covariance on " +
                         host().to_string());
      }
    }
  }

  double alpha_;
  Window diff_;
  std::vector<double> gamma_;
  std::size_t pin_ = 0;
  Eigen::MatrixXd chol_;
  double jitter_ = 0.0;
};

// Theta(i) = c_{i+S} / c_S, P(S = k) proportional to c_k^alpha.
class SequenceTheta final : public ThetaSampler {
 public:
  SequenceTheta(const SequenceModel& m, const Window& host) : ThetaSampler(host) {
    for (const auto& [p, c] : m.coeffs) {
      if (c > 0.0) coeffs_.push_back({p, c});
    }
    std::sort(coeffs_.begin(), coeffs_.end(), [](const Entry& a, const Entry& b) { return lex_less(a.at, b.at); });
    for (std::size_t k = 1; k < coeffs_.size(); ++k) {
      if (coeffs_[k].at == coeffs_[k - 1].at) throw ModelError("duplicate sequence coefficient at " + coeffs_[k].at.to_string());
    }
    double acc = 0.0;
    for (const auto& e : coeffs_) {
      acc += std::pow(e.value, m.alpha);
      cumulative_.push_back(acc);
    }
  }

  void draw(Engine& eng, const LatticePoint& shift, std::vector<Entry>& out) const override {
    check_shift(shift);
    const double u = uniform01(eng) * cumulative_.back();
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    const std::size_t s = std::min<std::size_t>(static_cast<std::size_t>(it - cumulative_.begin()),
                                                coeffs_.size() - 1);
    const Entry& anchor = coeffs_[s];
    const Window w = host().translated(-shift);
    out.clear();
    for (std::size_t k = 0; k < coeffs_.size(); ++k) {
      const LatticePoint j = coeffs_[k].at - anchor.at;
      if (w.contains(j)) out.push_back({j, k == s ? 1.0 : coeffs_[k].value / anchor.value});
    }
  }

 private:
  std::vector<Entry> coeffs_;
  std::vector<double> cumulative_;
};

class IndependentTheta final : public ThetaSampler {
 public:
  using ThetaSampler::ThetaSampler;
  void draw(Engine&, const LatticePoint& shift, std::vector<Entry>& out) const override {
    check_shift(shift);
    out.assign(1, Entry{LatticePoint::origin(dim()), 1.0});
  }
};

class AlternatingTheta final : public ThetaSampler {
 public:
  explicit AlternatingTheta(const Window& host) : ThetaSampler(host) {
    if (host.dim() != 1) throw UsageError("alternating model needs a one-dimensional window");
  }
  void draw(Engine&, const LatticePoint& shift, std::vector<Entry>& out) const override {
    check_shift(shift);
    const Window w = host().translated(-shift);
    out.clear();
    LatticePoint::Coord j = w.lower()[0];
    if (j % 2 != 0) ++j;
    for (; j <= w.upper()[0]; j += 2) out.push_back({LatticePoint{j}, 1.0});
  }
};

class ProductTheta final : public ThetaSampler {
 public:
  ProductTheta(const Product& m, const Window& host) : ThetaSampler(host), k_(model_dim(*m.first)) {
    first_ = make_theta_sampler(*m.first, host.slice_dims(0, k_));
    second_ = make_theta_sampler(*m.second, host.slice_dims(k_, host.dim() - k_));
  }

  void draw(Engine& eng, const LatticePoint& shift, std::vector<Entry>& out) const override {
    check_shift(shift);
    const int d = dim();
    LatticePoint s1(k_), s2(d - k_);
    for (int j = 0; j < k_; ++j) s1[j] = shift[j];
    for (int j = k_; j < d; ++j) s2[j - k_] = shift[j];
    std::vector<Entry> a, b;
    first_->draw(eng, s1, a);
    second_->draw(eng, s2, b);
    out.clear();
    out.reserve(a.size() * b.size());
    for (const auto& ea : a) {
      for (const auto& eb : b) {
        LatticePoint p(d);
        for (int j = 0; j < k_; ++j) p[j] = ea.at[j];
        for (int j = k_; j < d; ++j) p[j] = eb.at[j - k_];
        out.push_back({p, ea.value * eb.value});
      }
    }
  }

 private:
  int k_;
  std::unique_ptr<ThetaSampler> first_;
  std::unique_ptr<ThetaSampler> second_;
};

class MixtureTheta final : public ThetaSampler {
 public:
  MixtureTheta(const Mixture& m, const Window& host)
      : ThetaSampler(host), p_(m.p), first_(make_theta_sampler(*m.first, host)),
        second_(make_theta_sampler(*m.second, host)) {}

  void draw(Engine& eng, const LatticePoint& shift, std::vector<Entry>& out) const override {
    if (uniform01(eng) < p_) {
      first_->draw(eng, shift, out);
    } else {
      second_->draw(eng, shift, out);
    }
  }

 private:
  double p_;
  std::unique_ptr<ThetaSampler> first_;
  std::unique_ptr<ThetaSampler> second_;
};

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

std::unique_ptr<ThetaSampler> make_theta_sampler(const ModelSpec& m, const Window& host) {
  require_host_dim(m, host);
  return std::visit(
      overloaded{
          [&](const BrownResnick& b) -> std::unique_ptr<ThetaSampler> {
            return std::make_unique<BrownResnickTheta>(b, host);
          },
          [&](const SequenceModel& s) -> std::unique_ptr<ThetaSampler> {
            return std::make_unique<SequenceTheta>(s, host);
          },
          [&](const Independent&) -> std::unique_ptr<ThetaSampler> {
            return std::make_unique<IndependentTheta>(host);
          },
          [&](const Alternating&) -> std::unique_ptr<ThetaSampler> {
            return std::make_unique<AlternatingTheta>(host);
          },
          [&](const Product& p) -> std::unique_ptr<ThetaSampler> {
            return std::make_unique<ProductTheta>(p, host);
          },
          [&](const Mixture& x) -> std::unique_ptr<ThetaSampler> {
            return std::make_unique<MixtureTheta>(x, host);
          },
          [&](const FromTail& f) -> std::unique_ptr<ThetaSampler> { return make_theta_sampler(*f.tail, host); },
      },
      m.family);
}

TailSpectralSampler::TailSpectralSampler(const ModelSpec& tail, Window w, Window support)
    : ZSampler(std::move(w)), support_(std::move(support)), alpha_(model_alpha(tail)) {
  if (!support_.contains(window())) {
    throw UsageError("weight support " + support_.to_string() + " does not contain " + window().to_string());
  }
  bound_ = std::pow(static_cast<double>(support_.size()), 1.0 / alpha_);
  theta_ = make_theta_sampler(tail, support_);
}

TailSpectralSampler::TailSpectralSampler(const ModelSpec& tail, Window w,
                                         const std::vector<std::pair<LatticePoint, double>>& weights)
    : ZSampler(std::move(w)), alpha_(model_alpha(tail)) {
  if (weights.empty()) throw ModelError("weight map is empty");
  std::vector<LatticePoint> pts;
  for (const auto& [p, _] : weights) pts.push_back(p);
  support_ = Window::bounding(pts);
  if (!support_.contains(window())) {
    throw UsageError("weight support " + support_.to_string() + " does not contain " + window().to_string());
  }
  weights_.assign(support_.size(), 0.0);
  double total = 0.0;
  for (const auto& [p, v] : weights) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ModelError("weights must be positive at " + p.to_string());
    weights_[support_.index(p)] += v;
    total += v;
  }
  double acc = 0.0;
  double smallest = 1.0;
  for (auto& v : weights_) {
    v /= total;
    acc += v;
    cumulative_.push_back(acc);
    if (v > 0.0) smallest = std::min(smallest, v);
  }
  bound_ = std::pow(smallest, -1.0 / alpha_);
  theta_ = make_theta_sampler(tail, support_);
}

void TailSpectralSampler::draw(Engine& eng, std::vector<Entry>& out) const {
  LatticePoint n;
  draw_with_index(eng, out, n);
}

void TailSpectralSampler::draw_with_index(Engine& eng, std::vector<Entry>& out, LatticePoint& n) const {
  std::size_t idx = 0;
  if (weights_.empty()) {
    idx = std::uniform_int_distribution<std::size_t>(0, support_.size() - 1)(eng);
  } else {
    const double u = uniform01(eng) * cumulative_.back();
    idx = static_cast<std::size_t>(std::upper_bound(cumulative_.begin(), cumulative_.end(), u) -
                                   cumulative_.begin());
    idx = std::min(idx, weights_.size() - 1);
    while (weights_[idx] == 0.0) --idx;  // u landed on a flat step
  }
  n = support_.point(idx);

  thread_local std::vector<Entry> theta;
  theta_->draw(eng, n, theta);

  out.clear();
  bool after = false;
  if (weights_.empty()) {
    for (const auto& e : theta) {
      if (e.at.is_origin()) {
        after = true;
      } else if (after ? e.value > 1.0 : e.value >= 1.0) {
        return;
      }
    }
  } else {
    const double pn = weights_[idx];
    for (const auto& e : theta) {
      if (e.at.is_origin()) {
        after = true;
        continue;
      }
      const double pi = weights_[support_.index(e.at + n)];
      if (pi == 0.0) continue;
      const double lhs = pi * (alpha_ == 1.0 ? e.value : std::pow(e.value, alpha_));
      if (after ? lhs > pn : lhs >= pn) return;
    }
  }

  const double scale = weights_.empty() ? bound_ : std::pow(weights_[idx], -1.0 / alpha_);
  for (const auto& e : theta) {
    const LatticePoint t = e.at + n;
    if (window().contains(t)) out.push_back({t, scale * e.value});
  }
}

NativeBrownResnickSampler::NativeBrownResnickSampler(const BrownResnick& m, Window w, LatticePoint root)
    : ZSampler(std::move(w)), root_(std::move(root)) {
  if (!window().contains(root_)) throw UsageError("root " + root_.to_string() + " lies outside the window");
  theta_ = std::make_unique<BrownResnickTheta>(m, window());
}

void NativeBrownResnickSampler::draw(Engine& eng, std::vector<Entry>& out) const {
  theta_->draw(eng, root_, out);
  for (auto& e : out) e.at = e.at + root_;
}

Window default_support(const Window& w, LatticePoint::Coord margin) {
  if (margin < 0) {
    margin = 0;
    for (int j = 0; j < w.dim(); ++j) margin = std::max(margin, w.extent(j));
  }
  return w.expanded(margin);
}

std::unique_ptr<ZSampler> make_z_sampler(const ModelSpec& m, const Window& w, const SpectralOptions& opt) {
  require_host_dim(m, w);
  if (opt.construction == SpectralOptions::Construction::native) {
    const auto* br = std::get_if<BrownResnick>(&m.family);
    if (!br) throw UsageError("native spectral fields exist only for the Brown-Resnick model");
    return std::make_unique<NativeBrownResnickSampler>(*br, w, opt.root.value_or(w.lower()));
  }
  if (const auto* f = std::get_if<FromTail>(&m.family)) {
    return std::make_unique<TailSpectralSampler>(*f->tail, w, f->weights);
  }
  return std::make_unique<TailSpectralSampler>(m, w, default_support(w, opt.margin));
}

}  // namespace maxstable
