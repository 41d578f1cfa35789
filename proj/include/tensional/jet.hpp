#ifndef TENSIONAL_JET_HPP
#define TENSIONAL_JET_HPP

// Truncated multivariate Taylor arithmetic ("jets"). A Jet of order K in n
// variables stores, at a base point, the Taylor-normalized coefficients
// c_alpha = partial^alpha f / alpha! for all |alpha| <= K. Arithmetic on
// jets is exact for polynomials; elementary functions are composed through
// their univariate Taylor expansions around the jet's value.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "tensional/errors.hpp"

namespace tensional {

using MultiIndex = std::vector<std::uint8_t>;

inline constexpr int kMaxJetOrder = 6;

namespace detail {
inline int mi_degree(const MultiIndex& a) {
  int d = 0;
  for (auto e : a) d += e;
  return d;
}
}  // namespace detail

// Immutable bookkeeping for a (nvars, order) pair: the multi-index
// enumeration, position lookup, and the convolution table used by
// multiplication. Instances are cached and shared; pointer equality of
// spaces is what jet arithmetic checks for compatibility.
class JetSpace {
 public:
  static std::shared_ptr<const JetSpace> get(int nvars, int order) {
    if (nvars < 0) throw Error("jet space: negative variable count");
    if (order < 0) throw Error("jet space: negative order");
    if (order > kMaxJetOrder)
      throw OrderTooLarge("jet order " + std::to_string(order) + " exceeds the supported maximum " +
                          std::to_string(kMaxJetOrder));
    static std::mutex mu;
    static std::map<std::pair<int, int>, std::shared_ptr<const JetSpace>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(nvars, order);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    auto sp = std::shared_ptr<const JetSpace>(new JetSpace(nvars, order));
    cache.emplace(key, sp);
    return sp;
  }

  int nvars() const { return nvars_; }
  int order() const { return order_; }
  int size() const { return static_cast<int>(indices_.size()); }

  const MultiIndex& index(int slot) const { return indices_[slot]; }
  int degree(int slot) const { return degrees_[slot]; }
  double factorial(int slot) const { return factorials_[slot]; }

  // -1 when the multi-index is not representable in this space.
  int slot_of(const MultiIndex& mi) const {
    auto it = lookup_.find(mi);
    return it == lookup_.end() ? -1 : it->second;
  }

  struct MulEntry {
    std::int32_t a, b, target;
  };
  const std::vector<MulEntry>& mul_table() const { return mul_table_; }

  // slot of alpha + e_v, or -1 when that leaves the space
  int shift_up(int slot, int var) const { return shift_up_[var][slot]; }

 private:
  JetSpace(int nvars, int order) : nvars_(nvars), order_(order) {
    // Slots are grouped by ascending total degree, and the enumeration within
    // a degree depends only on nvars. Hence for equal nvars a lower-order
    // space's slot list is a prefix of a higher-order one's; derivative() and
    // truncated() rely on this to map slots across spaces without lookups.
    MultiIndex cur(static_cast<std::size_t>(nvars), 0);
    for (int d = 0; d <= order; ++d) enumerate(cur, 0, d);
    for (int s = 0; s < size(); ++s) lookup_.emplace(indices_[s], s);
    degrees_.resize(indices_.size());
    factorials_.resize(indices_.size());
    for (int s = 0; s < size(); ++s) {
      degrees_[s] = detail::mi_degree(indices_[s]);
      double f = 1.0;
      for (auto e : indices_[s])
        for (int k = 2; k <= e; ++k) f *= k;
      factorials_[s] = f;
    }
    for (int a = 0; a < size(); ++a) {
      for (int b = 0; b < size(); ++b) {
        if (degrees_[a] + degrees_[b] > order) continue;
        MultiIndex sum(indices_[a]);
        for (int v = 0; v < nvars; ++v) sum[v] = static_cast<std::uint8_t>(sum[v] + indices_[b][v]);
        mul_table_.push_back({a, b, slot_of(sum)});
      }
    }
    shift_up_.assign(nvars, std::vector<std::int32_t>(indices_.size(), -1));
    for (int v = 0; v < nvars; ++v) {
      for (int s = 0; s < size(); ++s) {
        MultiIndex up(indices_[s]);
        up[v]++;
        shift_up_[v][s] = slot_of(up);
      }
    }
  }

  void enumerate(MultiIndex& cur, int pos, int remaining) {
    if (pos == nvars_) {
      if (remaining == 0) indices_.push_back(cur);
      return;
    }
    if (pos == nvars_ - 1) {
      cur[pos] = static_cast<std::uint8_t>(remaining);
      indices_.push_back(cur);
      cur[pos] = 0;
      return;
    }
    for (int e = remaining; e >= 0; --e) {
      cur[pos] = static_cast<std::uint8_t>(e);
      enumerate(cur, pos + 1, remaining - e);
    }
    cur[pos] = 0;
  }

  int nvars_, order_;
  std::vector<MultiIndex> indices_;
  std::map<MultiIndex, std::int32_t> lookup_;
  std::vector<int> degrees_;
  std::vector<double> factorials_;
  std::vector<MulEntry> mul_table_;
  std::vector<std::vector<std::int32_t>> shift_up_;
};

using JetSpacePtr = std::shared_ptr<const JetSpace>;

class Jet {
 public:
  Jet() = default;

  static Jet constant(JetSpacePtr sp, std::vector<double> base, double v) {
    Jet j(std::move(sp), std::move(base));
    j.c_[0] = v;
    return j;
  }

  static Jet variable(JetSpacePtr sp, std::vector<double> base, int var) {
    if (var < 0 || var >= sp->nvars()) throw Error("jet variable index out of range");
    Jet j(std::move(sp), std::move(base));
    j.c_[0] = j.base_[var];
    if (j.space()->order() >= 1) {
      MultiIndex e(static_cast<std::size_t>(j.space()->nvars()), 0);
      e[var] = 1;
      j.c_[j.space()->slot_of(e)] = 1.0;
    }
    return j;
  }

  const JetSpacePtr& space() const { return sp_; }
  const std::vector<double>& base() const { return base_; }
  int order() const { return sp_->order(); }
  int nvars() const { return sp_->nvars(); }
  double value() const { return c_[0]; }

  const std::vector<double>& coeffs() const { return c_; }
  std::vector<double>& coeffs() { return c_; }

  double coeff(const MultiIndex& mi) const {
    if (detail::mi_degree(mi) > order())
      throw IndexTooDeep("multi-index of degree " + std::to_string(detail::mi_degree(mi)) +
                         " exceeds jet order " + std::to_string(order()));
    int s = sp_->slot_of(mi);
    if (s < 0) throw IndexTooDeep("multi-index does not belong to this jet space");
    return c_[s];
  }

  // mixed partial derivative: coefficient times multi-index factorial
  double partial(const MultiIndex& mi) const {
    if (detail::mi_degree(mi) > order())
      throw IndexTooDeep("multi-index of degree " + std::to_string(detail::mi_degree(mi)) +
                         " exceeds jet order " + std::to_string(order()));
    int s = sp_->slot_of(mi);
    if (s < 0) throw IndexTooDeep("multi-index does not belong to this jet space");
    return c_[s] * sp_->factorial(s);
  }

  // jet of the partial derivative with respect to variable v; order drops by one.
  // Slot s of the smaller space carries the same multi-index as slot s here
  // (prefix property), so the source slot comes from this space's shift table.
  Jet derivative(int var) const {
    if (order() == 0) throw Error("cannot differentiate an order-0 jet");
    Jet r(JetSpace::get(nvars(), order() - 1), base_);
    for (int s = 0; s < r.sp_->size(); ++s) {
      int src = sp_->shift_up(s, var);
      r.c_[s] = c_[src] * static_cast<double>(r.sp_->index(s)[var] + 1);
    }
    return r;
  }

  Jet truncated(int new_order) const {
    if (new_order > order()) throw Error("cannot truncate a jet upward");
    if (new_order == order()) return *this;
    Jet r(JetSpace::get(nvars(), new_order), base_);
    std::copy(c_.begin(), c_.begin() + r.sp_->size(), r.c_.begin());
    return r;
  }

  Jet operator-() const {
    Jet r(*this);
    for (auto& x : r.c_) x = -x;
    return r;
  }

  friend Jet operator+(const Jet& a, const Jet& b) {
    a.check_compatible(b);
    Jet r(a);
    for (int s = 0; s < r.sp_->size(); ++s) r.c_[s] += b.c_[s];
    return r;
  }

  friend Jet operator-(const Jet& a, const Jet& b) {
    a.check_compatible(b);
    Jet r(a);
    for (int s = 0; s < r.sp_->size(); ++s) r.c_[s] -= b.c_[s];
    return r;
  }

  friend Jet operator*(const Jet& a, const Jet& b) {
    a.check_compatible(b);
    Jet r(a.sp_, a.base_);
    for (const auto& e : a.sp_->mul_table()) r.c_[e.target] += a.c_[e.a] * b.c_[e.b];
    return r;
  }

  friend Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }

  friend Jet operator+(const Jet& a, double s) {
    Jet r(a);
    r.c_[0] += s;
    return r;
  }
  friend Jet operator+(double s, const Jet& a) { return a + s; }
  friend Jet operator-(const Jet& a, double s) { return a + (-s); }
  friend Jet operator-(double s, const Jet& a) { return (-a) + s; }
  friend Jet operator*(const Jet& a, double s) {
    Jet r(a);
    for (auto& x : r.c_) x *= s;
    return r;
  }
  friend Jet operator*(double s, const Jet& a) { return a * s; }
  friend Jet operator/(const Jet& a, double s) { return a * (1.0 / s); }
  friend Jet operator/(double s, const Jet& a) { return reciprocal(a) * s; }

  Jet& operator+=(const Jet& b) { return *this = *this + b; }
  Jet& operator-=(const Jet& b) { return *this = *this - b; }
  Jet& operator*=(const Jet& b) { return *this = *this * b; }

  // f(u) from the Taylor coefficients d[k] = f^(k)(u0)/k! around u0 = u.value().
  // The deviation w = u - u0 is nilpotent at this order, so a Horner sweep is exact.
  static Jet apply_univariate(const Jet& u, const std::vector<double>& d) {
    Jet w(u);
    w.c_[0] = 0.0;
    int K = u.order();
    Jet r = Jet::constant(u.sp_, u.base_, d[K]);
    for (int k = K - 1; k >= 0; --k) {
      r = r * w;
      r.c_[0] += d[k];
    }
    return r;
  }

  static Jet reciprocal(const Jet& u) {
    double u0 = u.value();
    if (u0 == 0.0) throw DomainError("division by a quantity whose value is zero");
    std::vector<double> d(static_cast<std::size_t>(u.order()) + 1);
    double p = 1.0 / u0;
    for (int k = 0; k <= u.order(); ++k) {
      d[k] = p;
      p *= -1.0 / u0;
    }
    return apply_univariate(u, d);
  }

  // substitute: F is a jet in the target variables, args[a] are jets (in a
  // common source space) of those target coordinates; args[a].value() must
  // equal F's base point. Returns the jet of the composite in source space.
  static Jet compose(const Jet& F, const std::vector<Jet>& args) {
    if (static_cast<int>(args.size()) != F.nvars())
      throw Error("compose: argument count does not match jet variable count");
    if (args.empty()) {
      throw Error("compose: nullary composition is not defined");
    }
    const JetSpacePtr& ssp = args[0].space();
    for (const auto& a : args) {
      if (a.space() != ssp) throw Error("compose: argument jets live in different spaces");
      if (a.order() != F.order()) throw Error("compose: order mismatch between jets");
    }
    // deviations with the constant slot cleared
    std::vector<std::vector<Jet>> pow(args.size());
    for (std::size_t a = 0; a < args.size(); ++a) {
      Jet d = args[a];
      d.c_[0] = 0.0;
      pow[a].push_back(Jet::constant(ssp, args[a].base_, 1.0));
      for (int k = 1; k <= F.order(); ++k) pow[a].push_back(pow[a].back() * d);
    }
    Jet r = Jet::constant(ssp, args[0].base_, 0.0);
    for (int s = 0; s < F.sp_->size(); ++s) {
      double fc = F.c_[s];
      if (fc == 0.0) continue;
      const MultiIndex& gamma = F.sp_->index(s);
      Jet term = Jet::constant(ssp, args[0].base_, fc);
      for (std::size_t a = 0; a < args.size(); ++a)
        if (gamma[a] > 0) term = term * pow[a][gamma[a]];
      r = r + term;
    }
    return r;
  }

  // re-express this jet in a larger space whose variables [offset, offset+nvars)
  // are this jet's variables; all other coefficients are zero.
  Jet embedded(const JetSpacePtr& big, const std::vector<double>& big_base, int offset) const {
    if (big->order() != order()) throw Error("embed: order mismatch");
    Jet r(big, big_base);
    MultiIndex mi(static_cast<std::size_t>(big->nvars()), 0);
    for (int s = 0; s < sp_->size(); ++s) {
      std::fill(mi.begin(), mi.end(), 0);
      const MultiIndex& a = sp_->index(s);
      for (int v = 0; v < nvars(); ++v) mi[offset + v] = a[v];
      r.c_[big->slot_of(mi)] = c_[s];
    }
    return r;
  }

 private:
  Jet(JetSpacePtr sp, std::vector<double> base)
      : sp_(std::move(sp)), base_(std::move(base)), c_(static_cast<std::size_t>(sp_->size()), 0.0) {
    if (static_cast<int>(base_.size()) != sp_->nvars())
      throw Error("jet base point dimension does not match space");
  }

  void check_compatible(const Jet& b) const {
    if (sp_ != b.sp_) throw Error("jet arithmetic between different spaces");
  }

  JetSpacePtr sp_;
  std::vector<double> base_;
  std::vector<double> c_;
};

inline Jet sin(const Jet& u) {
  double c = std::cos(u.value()), s = std::sin(u.value());
  std::vector<double> d(static_cast<std::size_t>(u.order()) + 1);
  double fct = 1.0;
  for (int k = 0; k <= u.order(); ++k) {
    if (k > 0) fct *= k;
    switch (k % 4) {
      case 0: d[k] = s / fct; break;
      case 1: d[k] = c / fct; break;
      case 2: d[k] = -s / fct; break;
      default: d[k] = -c / fct; break;
    }
  }
  return Jet::apply_univariate(u, d);
}

inline Jet cos(const Jet& u) {
  double c = std::cos(u.value()), s = std::sin(u.value());
  std::vector<double> d(static_cast<std::size_t>(u.order()) + 1);
  double fct = 1.0;
  for (int k = 0; k <= u.order(); ++k) {
    if (k > 0) fct *= k;
    switch (k % 4) {
      case 0: d[k] = c / fct; break;
      case 1: d[k] = -s / fct; break;
      case 2: d[k] = -c / fct; break;
      default: d[k] = s / fct; break;
    }
  }
  return Jet::apply_univariate(u, d);
}

inline Jet exp(const Jet& u) {
  double e = std::exp(u.value());
  std::vector<double> d(static_cast<std::size_t>(u.order()) + 1);
  double fct = 1.0;
  for (int k = 0; k <= u.order(); ++k) {
    if (k > 0) fct *= k;
    d[k] = e / fct;
  }
  return Jet::apply_univariate(u, d);
}

inline Jet log(const Jet& u) {
  double u0 = u.value();
  if (u0 <= 0.0) throw DomainError("log of a non-positive value");
  std::vector<double> d(static_cast<std::size_t>(u.order()) + 1);
  d[0] = std::log(u0);
  double p = 1.0 / u0;
  for (int k = 1; k <= u.order(); ++k) {
    d[k] = ((k % 2) ? 1.0 : -1.0) * p / k;
    p /= u0;
  }
  return Jet::apply_univariate(u, d);
}

inline Jet pow(const Jet& u, double e) {
  double rounded = std::nearbyint(e);
  if (rounded == e && std::abs(e) <= 64.0) {
    long n = static_cast<long>(rounded);
    if (n == 0) return Jet::constant(u.space(), u.base(), 1.0);
    bool neg = n < 0;
    unsigned long k = static_cast<unsigned long>(neg ? -n : n);
    if (neg && u.value() == 0.0)
      throw DomainError("negative power of a quantity whose value is zero");
    // exact integer power by binary exponentiation (keeps polynomials exact)
    Jet acc = Jet::constant(u.space(), u.base(), 1.0);
    Jet b = u;
    while (k) {
      if (k & 1UL) acc = acc * b;
      k >>= 1UL;
      if (k) b = b * b;
    }
    return neg ? Jet::reciprocal(acc) : acc;
  }
  double u0 = u.value();
  if (u0 <= 0.0)
    throw DomainError("non-integer power requires a positive base, got base value " +
                      std::to_string(u0));
  std::vector<double> d(static_cast<std::size_t>(u.order()) + 1);
  d[0] = std::pow(u0, e);
  for (int k = 1; k <= u.order(); ++k) d[k] = d[k - 1] * (e - (k - 1)) / (k * u0);
  return Jet::apply_univariate(u, d);
}

inline Jet sqrt(const Jet& u) {
  double u0 = u.value();
  if (u0 < 0.0) throw DomainError("sqrt of a negative value");
  if (u0 == 0.0) {
    if (u.order() == 0) return Jet::constant(u.space(), u.base(), 0.0);
    throw DomainError("sqrt is not differentiable at zero");
  }
  return pow(u, 0.5);
}

// ---- small dense matrices of jets -----------------------------------------

struct JetMatrix {
  int rows = 0, cols = 0;
  std::vector<Jet> m;

  JetMatrix() = default;
  JetMatrix(int r, int c, const Jet& fill) : rows(r), cols(c), m(static_cast<std::size_t>(r) * c, fill) {}

  Jet& at(int r, int c) { return m[static_cast<std::size_t>(r) * cols + c]; }
  const Jet& at(int r, int c) const { return m[static_cast<std::size_t>(r) * cols + c]; }
};

// Gauss-Jordan inverse with partial pivoting on jet values. Pivot choice is a
// deterministic function of the inputs.
inline JetMatrix jet_matrix_inverse(const JetMatrix& a) {
  if (a.rows != a.cols) throw Error("jet matrix inverse needs a square matrix");
  int n = a.rows;
  const Jet& any = a.at(0, 0);
  Jet zero = Jet::constant(any.space(), any.base(), 0.0);
  Jet one = Jet::constant(any.space(), any.base(), 1.0);
  JetMatrix w = a;
  JetMatrix inv(n, n, zero);
  for (int i = 0; i < n; ++i) inv.at(i, i) = one;
  for (int col = 0; col < n; ++col) {
    int piv = col;
    double best = std::abs(w.at(col, col).value());
    for (int r = col + 1; r < n; ++r) {
      double cand = std::abs(w.at(r, col).value());
      if (cand > best) {
        best = cand;
        piv = r;
      }
    }
    if (best == 0.0) throw RankDeficient("jet matrix is singular at its value");
    if (piv != col) {
      for (int c = 0; c < n; ++c) {
        std::swap(w.at(piv, c), w.at(col, c));
        std::swap(inv.at(piv, c), inv.at(col, c));
      }
    }
    Jet d = Jet::reciprocal(w.at(col, col));
    for (int c = 0; c < n; ++c) {
      w.at(col, c) = w.at(col, c) * d;
      inv.at(col, c) = inv.at(col, c) * d;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      Jet f = w.at(r, col);
      if (f.value() == 0.0) {
        bool all_zero = true;
        for (double x : f.coeffs())
          if (x != 0.0) {
            all_zero = false;
            break;
          }
        if (all_zero) continue;
      }
      for (int c = 0; c < n; ++c) {
        w.at(r, c) = w.at(r, c) - f * w.at(col, c);
        inv.at(r, c) = inv.at(r, c) - f * inv.at(col, c);
      }
    }
  }
  return inv;
}

}  // namespace tensional

#endif
