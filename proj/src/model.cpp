#include "maxstable/model.hpp"

#include <cmath>

namespace maxstable {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

ModelRef make(auto family) { return std::make_shared<const ModelSpec>(ModelSpec{std::move(family)}); }

void require_alpha(double a) {
  if (!(a > 0.0) || !std::isfinite(a)) throw ModelError("alpha must be a positive finite number");
}

void require_ref(const ModelRef& m, const char* what) {
  if (!m) throw ModelError(std::string(what) + " component is missing");
}

}  // namespace

int SequenceModel::dim() const {
  if (coeffs.empty()) throw ModelError("sequence model has no coefficients");
  return coeffs.front().first.dim();
}

double SequenceModel::total() const {
  double c = 0.0;
  for (const auto& [_, v] : coeffs) c += std::pow(v, alpha);
  return c;
}

void SequenceModel::validate() const {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ModelError("sequence model needs alpha > 0");
  const int d = dim();
  bool positive = false;
  for (const auto& [p, v] : coeffs) {
    if (p.dim() != d) throw ModelError("sequence coefficients mix dimensions");
    if (!(v >= 0.0) || !std::isfinite(v)) throw ModelError("sequence coefficients must be finite and >= 0");
    positive = positive || v > 0.0;
  }
  if (!positive) throw ModelError("sequence model needs at least one positive coefficient");
}

ModelRef brown_resnick(Variogram v, double alpha) {
  auto m = make(BrownResnick{std::move(v), alpha});
  validate_model(*m);
  return m;
}

ModelRef sequence_model(std::vector<std::pair<LatticePoint, double>> coeffs, double alpha) {
  SequenceModel m{std::move(coeffs), alpha};
  m.validate();
  return make(std::move(m));
}

ModelRef sequence_model_1d(const std::vector<double>& coeffs, double alpha) {
  std::vector<std::pair<LatticePoint, double>> c;
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    c.emplace_back(LatticePoint{static_cast<LatticePoint::Coord>(k)}, coeffs[k]);
  }
  return sequence_model(std::move(c), alpha);
}

ModelRef independent_model(int dim, double alpha) {
  auto m = make(Independent{LatticePoint(dim).dim(), alpha});
  validate_model(*m);
  return m;
}

ModelRef alternating_model(double alpha) {
  auto m = make(Alternating{alpha});
  validate_model(*m);
  return m;
}

ModelRef product_model(ModelRef first, ModelRef second) {
  auto m = make(Product{std::move(first), std::move(second)});
  validate_model(*m);
  return m;
}

ModelRef mixture_model(double p, ModelRef first, ModelRef second) {
  auto m = make(Mixture{p, std::move(first), std::move(second)});
  validate_model(*m);
  return m;
}

ModelRef from_tail_model(ModelRef tail, std::vector<std::pair<LatticePoint, double>> weights) {
  auto m = make(FromTail{std::move(tail), std::move(weights)});
  validate_model(*m);
  return m;
}

int model_dim(const ModelSpec& m) {
  return std::visit(overloaded{
                        [](const BrownResnick& b) { return b.variogram.dim(); },
                        [](const SequenceModel& s) { return s.dim(); },
                        [](const Independent& i) { return i.dim; },
                        [](const Alternating&) { return 1; },
                        [](const Product& p) { return model_dim(*p.first) + model_dim(*p.second); },
                        [](const Mixture& x) { return model_dim(*x.first); },
                        [](const FromTail& f) { return model_dim(*f.tail); },
                    },
                    m.family);
}

std::string model_name(const ModelSpec& m) {
  return std::visit(overloaded{
                        [](const BrownResnick&) { return std::string("brown_resnick"); },
                        [](const SequenceModel&) { return std::string("sequence"); },
                        [](const Independent&) { return std::string("independent"); },
                        [](const Alternating&) { return std::string("alternating"); },
                        [](const Product&) { return std::string("product"); },
                        [](const Mixture&) { return std::string("mixture"); },
                        [](const FromTail&) { return std::string("from_tail"); },
                    },
                    m.family);
}

double model_alpha(const ModelSpec& m) {
  return std::visit(overloaded{
                        [](const BrownResnick& b) { return b.alpha; },
                        [](const SequenceModel& s) { return s.alpha; },
                        [](const Independent& i) { return i.alpha; },
                        [](const Alternating& a) { return a.alpha; },
                        [](const Product& p) { return model_alpha(*p.first); },
                        [](const Mixture& x) { return model_alpha(*x.first); },
                        [](const FromTail& f) { return model_alpha(*f.tail); },
                    },
                    m.family);
}

void validate_model(const ModelSpec& m) {
  std::visit(overloaded{
                 [](const BrownResnick& b) { require_alpha(b.alpha); },
                 [](const SequenceModel& s) { s.validate(); },
                 [](const Independent& i) {
                   LatticePoint(i.dim);
                   require_alpha(i.alpha);
                 },
                 [](const Alternating& a) { require_alpha(a.alpha); },
                 [](const Product& p) {
                   require_ref(p.first, "product");
                   require_ref(p.second, "product");
                   validate_model(*p.first);
                   validate_model(*p.second);
                   if (model_dim(*p.first) + model_dim(*p.second) > kMaxDim) {
                     throw ModelError("product dimension exceeds " + std::to_string(kMaxDim));
                   }
                   if (model_alpha(*p.first) != model_alpha(*p.second)) {
                     throw ModelError("product factors differ in alpha");
                   }
                 },
                 [](const Mixture& x) {
                   require_ref(x.first, "mixture");
                   require_ref(x.second, "mixture");
                   if (!(x.p > 0.0 && x.p < 1.0)) throw ModelError("mixture weight p must lie in (0,1)");
                   validate_model(*x.first);
                   validate_model(*x.second);
                   if (model_dim(*x.first) != model_dim(*x.second)) {
                     throw ModelError("mixture components differ in dimension");
                   }
                   if (model_alpha(*x.first) != model_alpha(*x.second)) {
                     throw ModelError("mixture components differ in alpha");
                   }
                 },
                 [](const FromTail& f) {
                   require_ref(f.tail, "from_tail");
                   validate_model(*f.tail);
                   if (f.weights.empty()) throw ModelError("from_tail needs a non-empty weight map");
                   const int d = model_dim(*f.tail);
                   for (const auto& [p, w] : f.weights) {
                     if (p.dim() != d) throw ModelError("weight map dimension mismatch");
                     if (!(w > 0.0) || !std::isfinite(w)) throw ModelError("weights must be positive");
                   }
                 },
             },
             m.family);
}

}  // namespace maxstable
