#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "ggt/bigint.hpp"
#include "ggt/common.hpp"
#include "ggt/fpvec.hpp"
#include "ggt/rng.hpp"

namespace ggt {

/// Univariate polynomial over F_p; c[i] is the coefficient of x^i.
struct Poly {
  int p = 2;
  std::vector<std::uint8_t> c;

  Poly() = default;
  Poly(int prime, std::vector<std::uint8_t> coeffs) : p(prime), c(std::move(coeffs)) { trim(); }
  static Poly zero(int p) { return Poly(p, {}); }
  static Poly one(int p) { return Poly(p, {1}); }
  static Poly x(int p) { return Poly(p, {0, 1}); }

  int degree() const { return static_cast<int>(c.size()) - 1; }  // -1 for zero
  bool is_zero() const { return c.empty(); }
  bool is_one() const { return c.size() == 1 && c[0] == 1; }
  void trim() {
    while (!c.empty() && c.back() == 0) c.pop_back();
  }

  bool operator==(const Poly& o) const { return p == o.p && c == o.c; }

  Poly operator+(const Poly& o) const {
    Poly r(p, {});
    r.c.resize(std::max(c.size(), o.c.size()), 0);
    for (std::size_t i = 0; i < r.c.size(); ++i) {
      int v = (i < c.size() ? c[i] : 0) + (i < o.c.size() ? o.c[i] : 0);
      r.c[i] = static_cast<std::uint8_t>(v % p);
    }
    r.trim();
    return r;
  }
  Poly operator-(const Poly& o) const {
    Poly r(p, {});
    r.c.resize(std::max(c.size(), o.c.size()), 0);
    for (std::size_t i = 0; i < r.c.size(); ++i) {
      int v = (i < c.size() ? c[i] : 0) + p - (i < o.c.size() ? o.c[i] : 0);
      r.c[i] = static_cast<std::uint8_t>(v % p);
    }
    r.trim();
    return r;
  }
  Poly operator*(const Poly& o) const {
    if (is_zero() || o.is_zero()) return zero(p);
    Poly r(p, {});
    r.c.assign(c.size() + o.c.size() - 1, 0);
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (!c[i]) continue;
      for (std::size_t j = 0; j < o.c.size(); ++j)
        r.c[i + j] = static_cast<std::uint8_t>((r.c[i + j] + c[i] * o.c[j]) % p);
    }
    r.trim();
    return r;
  }

  Poly scaled(int k) const {
    k %= p;
    if (k < 0) k += p;
    Poly r = *this;
    for (auto& v : r.c) v = static_cast<std::uint8_t>(v * k % p);
    r.trim();
    return r;
  }

  Poly monic() const {
    if (is_zero()) return *this;
    return scaled(fp_inverse(c.back(), p));
  }

  Poly derivative() const {
    Poly r(p, {});
    if (c.size() < 2) return r;
    r.c.resize(c.size() - 1);
    for (std::size_t i = 1; i < c.size(); ++i)
      r.c[i - 1] = static_cast<std::uint8_t>(c[i] * (i % p) % p);
    r.trim();
    return r;
  }

  static std::pair<Poly, Poly> divmod(const Poly& n, const Poly& d) {
    if (d.is_zero()) throw computation_error("polynomial division by zero");
    int p = n.p;
    Poly r = n;
    Poly q = zero(p);
    if (r.degree() >= d.degree()) q.c.assign(r.degree() - d.degree() + 1, 0);
    int dinv = fp_inverse(d.c.back(), p);
    while (!r.is_zero() && r.degree() >= d.degree()) {
      int k = r.degree() - d.degree();
      int coef = r.c.back() * dinv % p;
      q.c[k] = static_cast<std::uint8_t>(coef);
      for (int i = 0; i <= d.degree(); ++i) {
        int v = r.c[k + i] + p - coef * d.c[i] % p;
        r.c[k + i] = static_cast<std::uint8_t>(v % p);
      }
      r.trim();
    }
    q.trim();
    return {q, r};
  }
  Poly operator/(const Poly& o) const { return divmod(*this, o).first; }
  Poly operator%(const Poly& o) const { return divmod(*this, o).second; }

  static Poly gcd(Poly a, Poly b) {
    while (!b.is_zero()) {
      Poly r = divmod(a, b).second;
      a = std::move(b);
      b = std::move(r);
    }
    return a.is_zero() ? a : a.monic();
  }
};

inline Poly polymulmod(const Poly& a, const Poly& b, const Poly& m) {
  return (a * b) % m;
}

inline Poly polypow_mod(Poly base, std::uint64_t e, const Poly& m) {
  Poly r = Poly::one(base.p);
  base = base % m;
  while (e) {
    if (e & 1) r = polymulmod(r, base, m);
    base = polymulmod(base, base, m);
    e >>= 1;
  }
  return r;
}

inline Poly polypow_mod_big(Poly base, const BigUint& e, const Poly& m) {
  // Extract bits little-endian.
  std::vector<bool> bits;
  BigUint t = e;
  while (!t.is_zero()) {
    auto [q, r] = t.divmod_small(2);
    bits.push_back(r != 0);
    t = std::move(q);
  }
  Poly r = Poly::one(base.p);
  base = base % m;
  for (std::size_t i = bits.size(); i-- > 0;) {
    r = polymulmod(r, r, m);
    if (bits[i]) r = polymulmod(r, base, m);
  }
  return r;
}

/// Characteristic polynomial via Hessenberg reduction (exact over F_p).
inline Poly charpoly(const Mat& m0) {
  if (m0.rows != m0.cols) throw computation_error("charpoly of non-square matrix");
  int n = m0.rows, p = m0.p;
  if (n == 0) return Poly::one(p);
  Mat h = m0;
  for (int m = 1; m + 1 < n; ++m) {
    int piv = -1;
    for (int i = m; i < n; ++i)
      if (h.at(i, m - 1)) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    if (piv != m) {
      for (int j = 0; j < n; ++j) std::swap(h.at(piv, j), h.at(m, j));
      for (int i = 0; i < n; ++i) std::swap(h.at(i, piv), h.at(i, m));
    }
    int tinv = fp_inverse(h.at(m, m - 1), p);
    for (int i = m + 1; i < n; ++i) {
      if (!h.at(i, m - 1)) continue;
      int u = h.at(i, m - 1) * tinv % p;
      for (int j = 0; j < n; ++j)
        h.at(i, j) = static_cast<std::uint8_t>((h.at(i, j) + (p - u) * h.at(m, j)) % p);
      for (int i2 = 0; i2 < n; ++i2)
        h.at(i2, m) = static_cast<std::uint8_t>((h.at(i2, m) + u * h.at(i2, i)) % p);
    }
  }
  // p_m = (x - H[m-1][m-1]) p_{m-1} - sum_i (prod of subdiagonal) H[m-1-i][m-1] p_{m-1-i}
  std::vector<Poly> ps;
  ps.push_back(Poly::one(p));
  for (int m = 1; m <= n; ++m) {
    Poly pm = Poly(p, {static_cast<std::uint8_t>((p - h.at(m - 1, m - 1)) % p), 1}) * ps[m - 1];
    int t = 1;
    for (int i = 1; i < m; ++i) {
      t = t * h.at(m - i, m - i - 1) % p;
      if (!t) break;
      int coef = t * h.at(m - 1 - i, m - 1) % p;
      if (coef) pm = pm - ps[m - 1 - i].scaled(coef);
    }
    ps.push_back(pm);
  }
  return ps[n];
}

namespace detail {

inline Poly pth_root_poly(const Poly& f) {
  // Over F_p, f(x) with zero derivative is g(x^p); p-th roots of coefficients
  // are the coefficients themselves.
  Poly g(f.p, {});
  g.c.resize(f.c.size() / f.p + 1, 0);
  for (std::size_t i = 0; i < f.c.size(); i += f.p) g.c[i / f.p] = f.c[i];
  g.trim();
  return g;
}

inline void squarefree_decompose(const Poly& f, int mult, std::vector<std::pair<Poly, int>>& out) {
  if (f.degree() <= 0) return;
  Poly fp = f.derivative();
  if (fp.is_zero()) {
    squarefree_decompose(pth_root_poly(f), mult * f.p, out);
    return;
  }
  Poly c = Poly::gcd(f, fp);
  Poly w = f / c;
  int i = 1;
  while (!w.is_one()) {
    Poly y = Poly::gcd(w, c);
    Poly z = w / y;
    if (!z.is_one()) out.emplace_back(z.monic(), mult * i);
    ++i;
    w = y;
    c = c / y;
  }
  if (!c.is_one()) squarefree_decompose(c, mult, out);
}

inline void equal_degree_split(const Poly& f, int d, SplitMix64& rng, std::vector<Poly>& out) {
  if (f.degree() == d) {
    out.push_back(f.monic());
    return;
  }
  int p = f.p;
  for (int attempt = 0; attempt < 200; ++attempt) {
    Poly a(p, {});
    a.c.resize(f.degree());
    for (auto& v : a.c) v = static_cast<std::uint8_t>(rng.below(static_cast<std::uint64_t>(p)));
    a.trim();
    if (a.degree() < 1) continue;
    Poly g = Poly::gcd(a, f);
    if (g.degree() > 0 && g.degree() < f.degree()) {
      equal_degree_split(g, d, rng, out);
      equal_degree_split(f / g, d, rng, out);
      return;
    }
    Poly b;
    if (p == 2) {
      // Trace map over F_{2^d}.
      b = Poly::zero(2);
      Poly t = a % f;
      for (int i = 0; i < d; ++i) {
        b = b + t;
        t = polymulmod(t, t, f);
      }
    } else {
      BigUint e = BigUint::pow(BigUint(static_cast<std::uint64_t>(p)), static_cast<std::uint64_t>(d));
      e -= BigUint(1);
      e = e.divmod_small(2).first;
      b = polypow_mod_big(a, e, f) - Poly::one(p);
    }
    Poly g2 = Poly::gcd(b, f);
    if (g2.degree() > 0 && g2.degree() < f.degree()) {
      equal_degree_split(g2, d, rng, out);
      equal_degree_split(f / g2, d, rng, out);
      return;
    }
  }
  throw computation_error("equal-degree factorization did not converge");
}

}  // namespace detail

/// Full factorization into monic irreducibles with multiplicities.
inline std::vector<std::pair<Poly, int>> factor_poly(const Poly& f0, SplitMix64& rng) {
  Poly f = f0.monic();
  std::vector<std::pair<Poly, int>> sqf;
  detail::squarefree_decompose(f, 1, sqf);
  std::vector<std::pair<Poly, int>> out;
  for (auto& [g0, mult] : sqf) {
    Poly g = g0;
    Poly h = Poly::x(g.p) % g;
    int d = 0;
    while (g.degree() > 0) {
      ++d;
      if (2 * d > g.degree()) {
        out.emplace_back(g.monic(), mult);  // remainder is irreducible
        break;
      }
      h = polypow_mod(h, static_cast<std::uint64_t>(g.p), g);
      Poly gd = Poly::gcd(h - Poly::x(g.p), g);
      if (gd.degree() > 0) {
        std::vector<Poly> eq;
        detail::equal_degree_split(gd, d, rng, eq);
        for (auto& q : eq) out.emplace_back(q, mult);
        g = g / gd;
        h = h % g;
      }
    }
  }
  return out;
}

/// Evaluate a polynomial at a square matrix.
inline Mat poly_at_matrix(const Poly& f, const Mat& m) {
  Mat r(m.rows, m.cols, m.p);
  Mat power = Mat::identity(m.rows, m.p);
  for (std::size_t i = 0; i < f.c.size(); ++i) {
    if (f.c[i]) r = r + power.scaled(f.c[i]);
    if (i + 1 < f.c.size()) power = power * m;
  }
  return r;
}

}  // namespace ggt
