#include "maxstable/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>

namespace maxstable {

namespace {

void check_dim(int dim) {
  if (dim < 1 || dim > kMaxDim) {
    throw UsageError("lattice dimension must be in [1, " + std::to_string(kMaxDim) +
                     "], got " + std::to_string(dim));
  }
}

}  // namespace

LatticePoint::LatticePoint(int dim) : dim_(dim) { check_dim(dim); }

LatticePoint::LatticePoint(std::initializer_list<Coord> coords)
    : LatticePoint(std::span<const Coord>(coords.begin(), coords.size())) {}

LatticePoint::LatticePoint(std::span<const Coord> coords) : dim_(static_cast<int>(coords.size())) {
  check_dim(dim_);
  std::copy(coords.begin(), coords.end(), c_.begin());
}

bool LatticePoint::is_origin() const {
  for (int j = 0; j < dim_; ++j) {
    if (c_[j] != 0) return false;
  }
  return true;
}

LatticePoint::Coord LatticePoint::sup_norm() const {
  Coord m = 0;
  for (int j = 0; j < dim_; ++j) m = std::max(m, std::abs(c_[j]));
  return m;
}

double LatticePoint::euclidean_norm() const {
  double s = 0.0;
  for (int j = 0; j < dim_; ++j) s += static_cast<double>(c_[j]) * static_cast<double>(c_[j]);
  return std::sqrt(s);
}

LatticePoint LatticePoint::operator-() const {
  LatticePoint r = *this;
  for (int j = 0; j < dim_; ++j) r.c_[j] = -c_[j];
  return r;
}

void require_same_dim(const LatticePoint& a, const LatticePoint& b) {
  if (a.dim() != b.dim()) {
    throw UsageError("dimension mismatch: " + a.to_string() + " vs " + b.to_string());
  }
}

LatticePoint operator+(const LatticePoint& a, const LatticePoint& b) {
  require_same_dim(a, b);
  LatticePoint r = a;
  for (int j = 0; j < a.dim_; ++j) r.c_[j] += b.c_[j];
  return r;
}

LatticePoint operator-(const LatticePoint& a, const LatticePoint& b) {
  require_same_dim(a, b);
  LatticePoint r = a;
  for (int j = 0; j < a.dim_; ++j) r.c_[j] -= b.c_[j];
  return r;
}

bool operator==(const LatticePoint& a, const LatticePoint& b) {
  if (a.dim_ != b.dim_) return false;
  for (int j = 0; j < a.dim_; ++j) {
    if (a.c_[j] != b.c_[j]) return false;
  }
  return true;
}

std::string LatticePoint::to_string() const {
  std::ostringstream os;
  os << '(';
  for (int j = 0; j < dim_; ++j) {
    if (j) os << ',';
    os << c_[j];
  }
  os << ')';
  return os.str();
}

Ordering order_compare(LatticeOrder order, const LatticePoint& a, const LatticePoint& b) {
  require_same_dim(a, b);
  if (a == b) return Ordering::equal;
  return order_less(order, a, b) ? Ordering::less : Ordering::greater;
}

Window::Window(LatticePoint lower, LatticePoint upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
  require_same_dim(lower_, upper_);
  size_ = 1;
  for (int j = lower_.dim() - 1; j >= 0; --j) {
    if (upper_[j] < lower_[j]) {
      throw UsageError("window bounds must satisfy lower <= upper: " + lower_.to_string() +
                       " .. " + upper_.to_string());
    }
    stride_[j] = size_;
    size_ *= static_cast<std::size_t>(upper_[j] - lower_[j] + 1);
  }
}

Window Window::cube(int dim, LatticePoint::Coord lo, LatticePoint::Coord hi) {
  LatticePoint a(dim), b(dim);
  for (int j = 0; j < dim; ++j) {
    a[j] = lo;
    b[j] = hi;
  }
  return Window(a, b);
}

Window Window::bounding(std::span<const LatticePoint> points) {
  if (points.empty()) throw UsageError("bounding window of an empty point set");
  LatticePoint lo = points.front(), hi = points.front();
  for (const auto& p : points) {
    require_same_dim(p, lo);
    for (int j = 0; j < p.dim(); ++j) {
      lo[j] = std::min(lo[j], p[j]);
      hi[j] = std::max(hi[j], p[j]);
    }
  }
  return Window(lo, hi);
}

bool Window::contains(const LatticePoint& p) const {
  if (p.dim() != dim()) return false;
  for (int j = 0; j < p.dim(); ++j) {
    if (p[j] < lower_[j] || p[j] > upper_[j]) return false;
  }
  return true;
}

bool Window::contains(const Window& other) const {
  return contains(other.lower_) && contains(other.upper_);
}

bool Window::on_boundary(const LatticePoint& p) const {
  if (!contains(p)) return false;
  for (int j = 0; j < p.dim(); ++j) {
    if (p[j] == lower_[j] || p[j] == upper_[j]) return true;
  }
  return false;
}

std::size_t Window::index(const LatticePoint& p) const {
  std::size_t idx = 0;
  for (int j = 0; j < p.dim(); ++j) {
    idx += static_cast<std::size_t>(p[j] - lower_[j]) * stride_[j];
  }
  return idx;
}

LatticePoint Window::point(std::size_t index) const {
  LatticePoint p(dim());
  for (int j = 0; j < dim(); ++j) {
    p[j] = lower_[j] + static_cast<LatticePoint::Coord>(index / stride_[j]);
    index %= stride_[j];
  }
  return p;
}

Window Window::translated(const LatticePoint& h) const { return Window(lower_ + h, upper_ + h); }

Window Window::expanded(LatticePoint::Coord margin) const {
  LatticePoint lo = lower_, hi = upper_;
  for (int j = 0; j < dim(); ++j) {
    lo[j] -= margin;
    hi[j] += margin;
  }
  return Window(lo, hi);
}

Window Window::hull(const Window& other) const {
  require_same_dim(lower_, other.lower_);
  LatticePoint lo = lower_, hi = upper_;
  for (int j = 0; j < dim(); ++j) {
    lo[j] = std::min(lo[j], other.lower_[j]);
    hi[j] = std::max(hi[j], other.upper_[j]);
  }
  return Window(lo, hi);
}

Window Window::difference(const Window& other) const {
  return Window(lower_ - other.upper_, upper_ - other.lower_);
}

Window Window::slice_dims(int first, int count) const {
  if (first < 0 || count < 1 || first + count > dim()) {
    throw UsageError("slice_dims out of range");
  }
  LatticePoint lo(count), hi(count);
  for (int j = 0; j < count; ++j) {
    lo[j] = lower_[first + j];
    hi[j] = upper_[first + j];
  }
  return Window(lo, hi);
}

std::string Window::to_string() const { return lower_.to_string() + ".." + upper_.to_string(); }

std::vector<LatticePoint> window_points(const Window& w, LatticeOrder order) {
  std::vector<LatticePoint> pts;
  pts.reserve(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) pts.push_back(w.point(i));
  if (order == LatticeOrder::reversed_lexicographic) std::reverse(pts.begin(), pts.end());
  return pts;
}

const char* to_string(FieldTag tag) {
  switch (tag) {
    case FieldTag::Z: return "Z";
    case FieldTag::Theta: return "Theta";
    case FieldTag::Y: return "Y";
    case FieldTag::X: return "X";
  }
  return "?";
}

FieldSample::FieldSample(Window window, FieldTag tag)
    : window_(std::move(window)), values_(window_.size(), 0.0), tag_(tag) {}

FieldSample::FieldSample(Window window, std::vector<double> values, FieldTag tag)
    : window_(std::move(window)), values_(std::move(values)), tag_(tag) {
  if (values_.size() != window_.size()) {
    throw UsageError("field sample value count does not match window size");
  }
}

double FieldSample::at(const LatticePoint& p) const {
  if (!window_.contains(p)) throw UsageError("point " + p.to_string() + " outside window");
  return values_[window_.index(p)];
}

double& FieldSample::at(const LatticePoint& p) {
  if (!window_.contains(p)) throw UsageError("point " + p.to_string() + " outside window");
  return values_[window_.index(p)];
}

double FieldSample::value_or(const LatticePoint& p, double fallback) const {
  return window_.contains(p) ? values_[window_.index(p)] : fallback;
}

FieldSample FieldSample::scaled(double c) const {
  FieldSample r = *this;
  for (double& v : r.values_) v *= c;
  return r;
}

FieldSample shift_field(const FieldSample& f, const LatticePoint& h) {
  require_same_dim(f.window().lower(), h);
  FieldSample r(f.window().translated(h), std::vector<double>(f.values().begin(), f.values().end()),
                f.tag());
  r.set_weight(f.weight());
  return r;
}

FieldSample restrict_to(const FieldSample& f, const Window& w) {
  FieldSample r(w, f.tag());
  r.set_weight(f.weight());
  for (std::size_t i = 0; i < w.size(); ++i) r.values()[i] = f.value_or(w.point(i), 0.0);
  return r;
}

FieldSample to_dense(std::span<const Entry> entries, const Window& w, FieldTag tag) {
  FieldSample r(w, tag);
  for (const auto& e : entries) {
    if (w.contains(e.at)) r.values()[w.index(e.at)] = e.value;
  }
  return r;
}

std::vector<Entry> to_sparse(const FieldSample& f) {
  std::vector<Entry> out;
  const auto vals = f.values();
  for (std::size_t i = 0; i < vals.size(); ++i) {
    if (vals[i] != 0.0) out.push_back({f.window().point(i), vals[i]});
  }
  return out;
}

std::span<const Entry>::iterator lex_lower_bound(std::span<const Entry> entries,
                                                  const LatticePoint& p) {
  return std::lower_bound(entries.begin(), entries.end(), p,
                          [](const Entry& e, const LatticePoint& q) { return lex_less(e.at, q); });
}

}  // namespace maxstable
