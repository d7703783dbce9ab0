#pragma once
// Matrix representations: truncated bosonic modes, Jordan-Wigner fermionic
// modes (exact), the matrix exponential, and block-restricted comparison.

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <complex>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "gwt/errors.hpp"
#include "gwt/operator.hpp"
#include "gwt/scalar.hpp"

namespace gwt {

using CMatrix = Eigen::MatrixXcd;
using Complex = std::complex<double>;

/// Ordered list of modes. Basis states are occupation tuples with mode 0
/// most significant; fermionic modes carry Jordan-Wigner strings over the
/// fermionic modes that precede them.
class ModeRegistry {
 public:
  struct Mode {
    std::string name;
    Statistics statistics;
    int dim;
  };

  int add_boson(std::string name, int truncation) {
    if (truncation < 2) detail::fail("InvalidTruncation", name + ": truncation must be at least 2");
    modes_.push_back({std::move(name), Statistics::boson, truncation});
    return static_cast<int>(modes_.size()) - 1;
  }
  int add_fermion(std::string name) {
    modes_.push_back({std::move(name), Statistics::fermion, 2});
    return static_cast<int>(modes_.size()) - 1;
  }

  /// Binds an elementary symbol to the ladder operator of a mode.
  void bind(SymbolId symbol, int mode, bool dagger) {
    if (mode < 0 || mode >= static_cast<int>(modes_.size())) detail::fail("UnmappedSymbol", "no such mode");
    bindings_[symbol] = {mode, dagger};
  }
  bool is_bound(SymbolId s) const { return bindings_.count(s) > 0; }
  std::pair<int, bool> binding(SymbolId s) const {
    auto it = bindings_.find(s);
    if (it == bindings_.end()) detail::fail("UnmappedSymbol", "symbol #" + std::to_string(s));
    return it->second;
  }

  const std::vector<Mode>& modes() const { return modes_; }
  int mode_count() const { return static_cast<int>(modes_.size()); }

  int dimension() const {
    long long d = 1;
    for (const auto& m : modes_) d *= m.dim;
    return static_cast<int>(d);
  }

  std::vector<int> occupations(int index) const {
    std::vector<int> occ(modes_.size());
    for (int k = static_cast<int>(modes_.size()) - 1; k >= 0; --k) {
      occ[k] = index % modes_[k].dim;
      index /= modes_[k].dim;
    }
    return occ;
  }
  int index_of(const std::vector<int>& occ) const {
    int idx = 0;
    for (std::size_t k = 0; k < modes_.size(); ++k) {
      if (occ[k] < 0 || occ[k] >= modes_[k].dim) return -1;
      idx = idx * modes_[k].dim + occ[k];
    }
    return idx;
  }
  int total_occupation(int index) const {
    int t = 0;
    for (int n : occupations(index)) t += n;
    return t;
  }

  /// Nonzero entries (row, col, value) of the ladder operator of `mode`;
  /// values are sqrt(n) for bosons and +-1 for fermions.
  template <typename F>
  void for_each_ladder_entry(int mode, bool dagger, F&& f) const {
    int dim = dimension();
    for (int col = 0; col < dim; ++col) {
      std::vector<int> occ = occupations(col);
      int n = occ[mode];
      int target = dagger ? n + 1 : n - 1;
      if (target < 0 || target >= modes_[mode].dim) continue;
      int sign = 1;
      if (modes_[mode].statistics == Statistics::fermion)
        for (int k = 0; k < mode; ++k)
          if (modes_[k].statistics == Statistics::fermion && occ[k] % 2) sign = -sign;
      occ[mode] = target;
      int amp2 = dagger ? n + 1 : n;  // squared amplitude
      f(index_of(occ), col, sign, amp2);
    }
  }

  CMatrix ladder(int mode, bool dagger) const {
    int dim = dimension();
    CMatrix m = CMatrix::Zero(dim, dim);
    for_each_ladder_entry(mode, dagger, [&](int row, int col, int sign, int amp2) {
      m(row, col) = double(sign) * std::sqrt(double(amp2));
    });
    return m;
  }

 private:
  std::vector<Mode> modes_;
  std::map<SymbolId, std::pair<int, bool>> bindings_;
};

namespace detail {

inline NumericContext with_square_roots(const Registry& reg, NumericContext ctx) {
  for (const auto& [name, value] : reg.squares())
    if (!ctx.assignments.count(name)) ctx.assignments[name] = std::sqrt(value.to_complex());
  return ctx;
}

}  // namespace detail

/// Dense matrix of a polynomial. Composite symbols are expanded; scalars
/// are evaluated in `ctx` (declared square relations supply their roots).
inline CMatrix represent(const OperatorPoly& p, const ModeRegistry& modes, const NumericContext& ctx = {}) {
  const RegistryPtr& reg = p.registry();
  int dim = modes.dimension();
  CMatrix out = CMatrix::Zero(dim, dim);
  if (p.is_zero()) return out;
  NumericContext full = detail::with_square_roots(*reg, ctx);
  std::map<SymbolId, CMatrix> cache;
  auto matrix_of = [&](SymbolId s) -> const CMatrix& {
    auto it = cache.find(s);
    if (it != cache.end()) return it->second;
    CMatrix m;
    if (reg->is_elementary(s)) {
      auto [mode, dagger] = modes.binding(s);
      m = modes.ladder(mode, dagger);
    } else {
      m = CMatrix::Zero(dim, dim);
      for (const auto& [e, c] : reg->expansion(s)) {
        auto [mode, dagger] = modes.binding(e);
        m += c.evaluate(full) * modes.ladder(mode, dagger);
      }
    }
    return cache.emplace(s, std::move(m)).first->second;
  };
  for (const auto& [w, c] : p.terms()) {
    CMatrix m = CMatrix::Identity(dim, dim);
    for (SymbolId s : w) m = m * matrix_of(s);
    out += c.evaluate(full) * m;
  }
  return out;
}

/// Small dense matrix over the Gaussian rationals, for exact fermionic work.
class ExactMatrix {
 public:
  ExactMatrix() = default;
  ExactMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(std::size_t(rows) * cols) {}
  static ExactMatrix identity(int n) {
    ExactMatrix m(n, n);
    for (int k = 0; k < n; ++k) m(k, k) = GaussianRational(1);
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  GaussianRational& operator()(int r, int c) { return data_[std::size_t(r) * cols_ + c]; }
  const GaussianRational& operator()(int r, int c) const { return data_[std::size_t(r) * cols_ + c]; }

  friend ExactMatrix operator*(const ExactMatrix& a, const ExactMatrix& b) {
    ExactMatrix out(a.rows_, b.cols_);
    for (int i = 0; i < a.rows_; ++i)
      for (int k = 0; k < a.cols_; ++k) {
        const GaussianRational& x = a(i, k);
        if (x.is_zero()) continue;
        for (int j = 0; j < b.cols_; ++j)
          if (!b(k, j).is_zero()) out(i, j) += x * b(k, j);
      }
    return out;
  }
  ExactMatrix& operator+=(const ExactMatrix& o) {
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
  }
  friend ExactMatrix operator+(ExactMatrix a, const ExactMatrix& b) { return a += b; }
  friend ExactMatrix operator-(ExactMatrix a, const ExactMatrix& b) {
    for (std::size_t k = 0; k < a.data_.size(); ++k) a.data_[k] -= b.data_[k];
    return a;
  }
  friend ExactMatrix operator*(const GaussianRational& c, ExactMatrix m) {
    for (auto& x : m.data_) x *= c;
    return m;
  }
  friend bool operator==(const ExactMatrix& a, const ExactMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }
  bool is_zero() const {
    for (const auto& x : data_)
      if (!x.is_zero()) return false;
    return true;
  }
  CMatrix to_complex() const {
    CMatrix m(rows_, cols_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) m(i, j) = (*this)(i, j).to_complex();
    return m;
  }

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<GaussianRational> data_;
};

/// Exact representation on fermionic modes; every scalar must be a constant.
inline ExactMatrix represent_exact(const OperatorPoly& p, const ModeRegistry& modes) {
  for (const auto& m : modes.modes())
    if (m.statistics != Statistics::fermion)
      detail::fail("NotExact", m.name + " is bosonic; ladder amplitudes are irrational");
  const RegistryPtr& reg = p.registry();
  int dim = modes.dimension();
  std::map<SymbolId, ExactMatrix> cache;
  auto ladder = [&](SymbolId e) {
    auto [mode, dagger] = modes.binding(e);
    ExactMatrix m(dim, dim);
    modes.for_each_ladder_entry(mode, dagger,
                                [&](int row, int col, int sign, int) { m(row, col) = GaussianRational(sign); });
    return m;
  };
  auto matrix_of = [&](SymbolId s) -> const ExactMatrix& {
    auto it = cache.find(s);
    if (it != cache.end()) return it->second;
    ExactMatrix m(dim, dim);
    if (reg->is_elementary(s)) {
      m = ladder(s);
    } else {
      for (const auto& [e, c] : reg->expansion(s)) m += c.reduce_squares(reg->squares()).constant() * ladder(e);
    }
    return cache.emplace(s, std::move(m)).first->second;
  };
  ExactMatrix out(dim, dim);
  for (const auto& [w, c] : p.terms()) {
    ExactMatrix m = ExactMatrix::identity(dim);
    for (SymbolId s : w) m = m * matrix_of(s);
    out += c.reduce_squares(reg->squares()).constant() * m;
  }
  return out;
}

inline constexpr int kMaxDenseDimension = 2000;

/// Matrix exponential (scaling and squaring with Pade approximants).
inline CMatrix matexp(const CMatrix& m) {
  if (m.rows() != m.cols()) detail::fail("NotSquare", "matrix exponential needs a square matrix");
  if (m.rows() > kMaxDenseDimension)
    detail::fail("DimensionTooLarge", std::to_string(m.rows()) + " > " + std::to_string(kMaxDenseDimension));
  return m.exp();
}

/// Basis indices whose total occupation is at most max_occupation.
inline std::vector<int> block_indices(const ModeRegistry& modes, int max_occupation) {
  std::vector<int> idx;
  for (int k = 0; k < modes.dimension(); ++k)
    if (modes.total_occupation(k) <= max_occupation) idx.push_back(k);
  return idx;
}

inline CMatrix restrict_block(const CMatrix& m, const std::vector<int>& idx) {
  CMatrix out(idx.size(), idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = 0; j < idx.size(); ++j) out(i, j) = m(idx[i], idx[j]);
  return out;
}

/// Largest absolute entry difference on the low-occupation block.
inline double block_compare(const CMatrix& a, const CMatrix& b, const ModeRegistry& modes, int max_occupation) {
  int dim = modes.dimension();
  if (a.rows() != dim || a.cols() != dim || b.rows() != dim || b.cols() != dim)
    detail::fail("RegistryMismatch", "matrix size does not match the mode registry");
  double worst = 0;
  auto idx = block_indices(modes, max_occupation);
  for (int i : idx)
    for (int j : idx) worst = std::max(worst, std::abs(a(i, j) - b(i, j)));
  return worst;
}

/// ||U^dagger U - I|| (max entry) on the low-occupation block, computed
/// with the full intermediate sum.
inline double unitarity_defect(const CMatrix& u, const ModeRegistry& modes, int max_occupation) {
  CMatrix g = u.adjoint() * u;
  CMatrix id = CMatrix::Identity(u.rows(), u.cols());
  return block_compare(g, id, modes, max_occupation);
}

/// Bosonic ladder operator reference for quadratic forms.
struct Ladder {
  int mode;
  bool dagger;
};

/// Matrix of N[exp(c + 1/2 K_ij x_i x_j)] where x_i are ladder operators.
/// Only entries between states of total occupation <= max_occupation are
/// filled; they are exact finite sums (no truncation of the exponential).
inline CMatrix normal_gaussian_matrix(const ModeRegistry& modes, const std::vector<Ladder>& vars, const CMatrix& k,
                                      Complex prefactor, int max_occupation) {
  using LD = long double;
  using LC = std::complex<long double>;
  int nm = modes.mode_count();
  for (const auto& m : modes.modes())
    if (m.statistics != Statistics::boson) detail::fail("FlavorMismatch", "Gaussian matrices need bosonic modes");
  if (k.rows() != static_cast<int>(vars.size()) || k.cols() != k.rows())
    detail::fail("InvalidArgument", "quadratic form size does not match the variable list");
  int r = max_occupation;
  // exponent layout: creators of each mode, then annihilators of each mode
  int nvar = 2 * nm;
  std::vector<int> stride(nvar);
  int total = 1;
  for (int v = nvar - 1; v >= 0; --v) {
    stride[v] = total;
    total *= r + 1;
  }
  auto var_of = [&](const Ladder& l) { return l.dagger ? l.mode : nm + l.mode; };

  // Q as a list of (variable pair, coefficient) with x_i x_j commuting
  std::map<std::pair<int, int>, LC> q;
  for (std::size_t i = 0; i < vars.size(); ++i)
    for (std::size_t j = 0; j < vars.size(); ++j) {
      Complex c = 0.5 * k(i, j);
      if (c == Complex(0)) continue;
      int a = var_of(vars[i]), b = var_of(vars[j]);
      q[{std::min(a, b), std::max(a, b)}] += LC(c.real(), c.imag());
    }

  auto degree_ok = [&](int idx) {
    int cre = 0, ann = 0;
    for (int v = 0; v < nvar; ++v) {
      int e = idx / stride[v] % (r + 1);
      (v < nm ? cre : ann) += e;
    }
    return cre <= r && ann <= r;
  };

  std::vector<LC> series(total, LC(0)), term(total, LC(0));
  term[0] = 1;
  series[0] = 1;
  for (int n = 1;; ++n) {
    std::vector<LC> next(total, LC(0));
    bool any = false;
    for (int idx = 0; idx < total; ++idx) {
      if (term[idx] == LC(0)) continue;
      for (const auto& [ab, c] : q) {
        int a = ab.first, b = ab.second;
        int ea = idx / stride[a] % (r + 1);
        int eb = idx / stride[b] % (r + 1);
        if (a == b ? ea + 2 > r : (ea + 1 > r || eb + 1 > r)) continue;
        int to = idx + stride[a] + stride[b];
        if (!degree_ok(to)) continue;
        next[to] += term[idx] * c / LD(n);
        any = true;
      }
    }
    if (!any) break;
    term.swap(next);
    for (int idx = 0; idx < total; ++idx) series[idx] += term[idx];
  }

  auto lfact = [](int n) { return std::lgamma(LD(n) + 1); };
  int dim = modes.dimension();
  CMatrix out = CMatrix::Zero(dim, dim);
  auto idx = block_indices(modes, max_occupation);
  LC pre(prefactor.real(), prefactor.imag());
  for (int row : idx) {
    auto m = modes.occupations(row);
    for (int col : idx) {
      auto nocc = modes.occupations(col);
      // sum over annihilator exponents s <= n; creators r = m - n + s
      std::vector<int> s(nm, 0);
      LC acc = 0;
      while (true) {
        bool valid = true;
        int sidx = 0;
        LD log_amp = 0;
        for (int md = 0; md < nm && valid; ++md) {
          int rr = m[md] - nocc[md] + s[md];
          if (rr < 0 || rr > r) {
            valid = false;
            break;
          }
          sidx += rr * stride[md] + s[md] * stride[nm + md];
          log_amp += 0.5L * (lfact(nocc[md]) - lfact(nocc[md] - s[md])) +
                     0.5L * (lfact(m[md]) - lfact(nocc[md] - s[md]));
        }
        if (valid && series[sidx] != LC(0)) acc += series[sidx] * std::exp(log_amp);
        int md = 0;
        while (md < nm && ++s[md] > nocc[md]) s[md++] = 0;
        if (md == nm) break;
      }
      acc *= pre;
      out(row, col) = Complex(double(acc.real()), double(acc.imag()));
    }
  }
  return out;
}

/// Matrix elements <m| exp(alpha x^2) |n> in the oscillator eigenbasis
/// (x = (a + a†)/sqrt 2), alpha < 1/2, from the Hermite generating function:
///   sum_mn <m|e^{alpha x^2}|n> s^m t^n / sqrt(m! n!)
///     = (1 - alpha)^{-1/2} exp(A (s^2 + t^2) + B s t),
/// A = alpha / (2 (1 - alpha)), B = 1 / (1 - alpha). Computed in 50 digits.
using BigFloat = boost::multiprecision::cpp_bin_float_50;

inline std::vector<std::vector<BigFloat>> gaussian_position_elements(const BigFloat& alpha, int rows, int cols) {
  if (!(alpha < BigFloat(0.5))) detail::fail("InvalidArgument", "exp(alpha x^2) needs alpha < 1/2");
  BigFloat one_minus = 1 - alpha;
  BigFloat a = alpha / (2 * one_minus), b = 1 / one_minus;
  BigFloat pre = 1 / sqrt(one_minus);
  int nmax = std::max(rows, cols);
  std::vector<BigFloat> fact(nmax + 1), sqrt_fact(nmax + 1), apow(nmax + 1), bpow(nmax + 1);
  fact[0] = 1;
  for (int k = 1; k <= nmax; ++k) fact[k] = fact[k - 1] * k;
  for (int k = 0; k <= nmax; ++k) sqrt_fact[k] = sqrt(fact[k]);
  apow[0] = bpow[0] = 1;
  for (int k = 1; k <= nmax; ++k) {
    apow[k] = apow[k - 1] * a;
    bpow[k] = bpow[k - 1] * b;
  }
  std::vector<std::vector<BigFloat>> out(rows, std::vector<BigFloat>(cols, BigFloat(0)));
  for (int m = 0; m < rows; ++m)
    for (int n = 0; n < cols; ++n) {
      if ((m + n) % 2) continue;
      BigFloat tot = 0;
      for (int j = m % 2; j <= std::min(m, n); j += 2) {
        int u = (m - j) / 2, v = (n - j) / 2;
        tot += apow[u] * apow[v] * bpow[j] / (fact[u] * fact[v] * fact[j]);
      }
      out[m][n] = pre * sqrt_fact[m] * sqrt_fact[n] * tot;
    }
  return out;
}

}  // namespace gwt
