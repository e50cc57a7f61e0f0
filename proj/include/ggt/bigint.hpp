#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ggt/common.hpp"

namespace ggt {

/// Unsigned arbitrary-precision integer. Base 2^32, little-endian limbs,
/// no trailing zero limbs (zero is the empty limb vector).
class BigUint {
 public:
  BigUint() = default;
  BigUint(std::uint64_t v) {
    if (v) {
      limbs_.push_back(static_cast<std::uint32_t>(v));
      if (v >> 32) limbs_.push_back(static_cast<std::uint32_t>(v >> 32));
    }
  }

  static BigUint from_decimal(std::string_view s) {
    if (s.empty()) throw usage_error("empty decimal string");
    BigUint r;
    for (char c : s) {
      if (c < '0' || c > '9') throw usage_error("bad decimal digit");
      r = r.mul_small(10);
      r += BigUint(static_cast<std::uint64_t>(c - '0'));
    }
    return r;
  }

  bool is_zero() const { return limbs_.empty(); }
  bool is_one() const { return limbs_.size() == 1 && limbs_[0] == 1; }

  bool fits_u64() const { return limbs_.size() <= 2; }
  std::uint64_t to_u64() const {
    std::uint64_t v = 0;
    if (limbs_.size() > 2) throw computation_error("BigUint too large for u64");
    if (limbs_.size() > 1) v = static_cast<std::uint64_t>(limbs_[1]) << 32;
    if (!limbs_.empty()) v |= limbs_[0];
    return v;
  }

  int compare(const BigUint& o) const {
    if (limbs_.size() != o.limbs_.size())
      return limbs_.size() < o.limbs_.size() ? -1 : 1;
    for (std::size_t i = limbs_.size(); i-- > 0;)
      if (limbs_[i] != o.limbs_[i]) return limbs_[i] < o.limbs_[i] ? -1 : 1;
    return 0;
  }
  bool operator==(const BigUint& o) const { return compare(o) == 0; }
  bool operator!=(const BigUint& o) const { return compare(o) != 0; }
  bool operator<(const BigUint& o) const { return compare(o) < 0; }
  bool operator<=(const BigUint& o) const { return compare(o) <= 0; }
  bool operator>(const BigUint& o) const { return compare(o) > 0; }
  bool operator>=(const BigUint& o) const { return compare(o) >= 0; }

  BigUint& operator+=(const BigUint& o) {
    limbs_.resize(std::max(limbs_.size(), o.limbs_.size()), 0);
    std::uint64_t carry = 0;
    for (std::size_t i = 0; i < limbs_.size(); ++i) {
      std::uint64_t s = carry + limbs_[i];
      if (i < o.limbs_.size()) s += o.limbs_[i];
      limbs_[i] = static_cast<std::uint32_t>(s);
      carry = s >> 32;
    }
    if (carry) limbs_.push_back(static_cast<std::uint32_t>(carry));
    return *this;
  }
  BigUint operator+(const BigUint& o) const {
    BigUint r = *this;
    r += o;
    return r;
  }

  // Requires *this >= o.
  BigUint& operator-=(const BigUint& o) {
    if (*this < o) throw computation_error("BigUint underflow");
    std::int64_t borrow = 0;
    for (std::size_t i = 0; i < limbs_.size(); ++i) {
      std::int64_t d = static_cast<std::int64_t>(limbs_[i]) - borrow -
                       (i < o.limbs_.size() ? o.limbs_[i] : 0);
      borrow = d < 0;
      if (d < 0) d += (std::int64_t{1} << 32);
      limbs_[i] = static_cast<std::uint32_t>(d);
    }
    trim();
    return *this;
  }
  BigUint operator-(const BigUint& o) const {
    BigUint r = *this;
    r -= o;
    return r;
  }

  BigUint mul_small(std::uint32_t m) const {
    if (m == 0 || is_zero()) return BigUint();
    BigUint r;
    r.limbs_.resize(limbs_.size() + 1, 0);
    std::uint64_t carry = 0;
    for (std::size_t i = 0; i < limbs_.size(); ++i) {
      std::uint64_t s = static_cast<std::uint64_t>(limbs_[i]) * m + carry;
      r.limbs_[i] = static_cast<std::uint32_t>(s);
      carry = s >> 32;
    }
    r.limbs_[limbs_.size()] = static_cast<std::uint32_t>(carry);
    r.trim();
    return r;
  }

  BigUint operator*(const BigUint& o) const {
    if (is_zero() || o.is_zero()) return BigUint();
    BigUint r;
    r.limbs_.assign(limbs_.size() + o.limbs_.size(), 0);
    for (std::size_t i = 0; i < limbs_.size(); ++i) {
      std::uint64_t carry = 0;
      for (std::size_t j = 0; j < o.limbs_.size(); ++j) {
        std::uint64_t s = static_cast<std::uint64_t>(limbs_[i]) * o.limbs_[j] +
                          r.limbs_[i + j] + carry;
        r.limbs_[i + j] = static_cast<std::uint32_t>(s);
        carry = s >> 32;
      }
      r.limbs_[i + o.limbs_.size()] += static_cast<std::uint32_t>(carry);
    }
    r.trim();
    return r;
  }

  /// (quotient, remainder); divisor must be nonzero. Knuth algorithm D.
  static std::pair<BigUint, BigUint> divmod(const BigUint& n, const BigUint& d) {
    if (d.is_zero()) throw computation_error("division by zero");
    if (n < d) return {BigUint(), n};
    if (d.limbs_.size() == 1) {
      auto [q, r] = n.divmod_small(d.limbs_[0]);
      return {q, BigUint(r)};
    }
    // Normalize so the divisor's top limb has its high bit set.
    int shift = 0;
    for (std::uint32_t t = d.limbs_.back(); !(t & 0x80000000u); t <<= 1) ++shift;
    BigUint u = n.shl_bits(shift);
    BigUint v = d.shl_bits(shift);
    std::size_t m = u.limbs_.size() - v.limbs_.size();
    std::size_t vn = v.limbs_.size();
    u.limbs_.push_back(0);
    BigUint q;
    q.limbs_.assign(m + 1, 0);
    const std::uint64_t b = std::uint64_t{1} << 32;
    for (std::size_t j = m + 1; j-- > 0;) {
      std::uint64_t top = (static_cast<std::uint64_t>(u.limbs_[j + vn]) << 32) |
                          u.limbs_[j + vn - 1];
      std::uint64_t qhat = top / v.limbs_[vn - 1];
      std::uint64_t rhat = top % v.limbs_[vn - 1];
      while (qhat >= b ||
             qhat * v.limbs_[vn - 2] > ((rhat << 32) | u.limbs_[j + vn - 2])) {
        --qhat;
        rhat += v.limbs_[vn - 1];
        if (rhat >= b) break;
      }
      // u[j .. j+vn] -= qhat * v
      std::int64_t borrow = 0;
      std::uint64_t carry = 0;
      for (std::size_t i = 0; i < vn; ++i) {
        std::uint64_t p = qhat * v.limbs_[i] + carry;
        carry = p >> 32;
        std::int64_t t = static_cast<std::int64_t>(u.limbs_[i + j]) -
                         static_cast<std::int64_t>(p & 0xffffffffu) - borrow;
        borrow = t < 0;
        if (t < 0) t += static_cast<std::int64_t>(b);
        u.limbs_[i + j] = static_cast<std::uint32_t>(t);
      }
      std::int64_t t = static_cast<std::int64_t>(u.limbs_[j + vn]) -
                       static_cast<std::int64_t>(carry) - borrow;
      if (t < 0) {
        // qhat was one too large; add v back.
        --qhat;
        std::uint64_t c2 = 0;
        for (std::size_t i = 0; i < vn; ++i) {
          std::uint64_t s = static_cast<std::uint64_t>(u.limbs_[i + j]) +
                            v.limbs_[i] + c2;
          u.limbs_[i + j] = static_cast<std::uint32_t>(s);
          c2 = s >> 32;
        }
        t += static_cast<std::int64_t>(c2);
        t += static_cast<std::int64_t>(b) * 0;  // t now the corrected top limb
        t &= static_cast<std::int64_t>(0xffffffffll);
      }
      u.limbs_[j + vn] = static_cast<std::uint32_t>(t);
      q.limbs_[j] = static_cast<std::uint32_t>(qhat);
    }
    q.trim();
    u.limbs_.resize(vn);
    u.trim();
    return {q, u.shr_bits(shift)};
  }

  BigUint operator/(const BigUint& o) const { return divmod(*this, o).first; }
  BigUint operator%(const BigUint& o) const { return divmod(*this, o).second; }

  std::pair<BigUint, std::uint32_t> divmod_small(std::uint32_t d) const {
    if (d == 0) throw computation_error("division by zero");
    BigUint q;
    q.limbs_.assign(limbs_.size(), 0);
    std::uint64_t rem = 0;
    for (std::size_t i = limbs_.size(); i-- > 0;) {
      std::uint64_t cur = (rem << 32) | limbs_[i];
      q.limbs_[i] = static_cast<std::uint32_t>(cur / d);
      rem = cur % d;
    }
    q.trim();
    return {q, static_cast<std::uint32_t>(rem)};
  }

  static BigUint pow(BigUint base, std::uint64_t e) {
    BigUint r(1);
    while (e) {
      if (e & 1) r = r * base;
      base = base * base;
      e >>= 1;
    }
    return r;
  }

  static BigUint gcd(BigUint a, BigUint b) {
    while (!b.is_zero()) {
      BigUint r = divmod(a, b).second;
      a = std::move(b);
      b = std::move(r);
    }
    return a;
  }

  std::string to_decimal() const {
    if (is_zero()) return "0";
    std::string out;
    BigUint t = *this;
    while (!t.is_zero()) {
      auto [q, r] = t.divmod_small(1000000000u);
      char buf[10];
      for (int i = 0; i < 9; ++i) {
        buf[i] = static_cast<char>('0' + r % 10);
        r /= 10;
      }
      int digits = q.is_zero() ? 0 : 9;
      if (q.is_zero()) {
        int top = 8;
        while (top > 0 && buf[top] == '0') --top;
        digits = top + 1;
      }
      for (int i = 0; i < digits; ++i) out.push_back(buf[i]);
      t = std::move(q);
    }
    std::reverse(out.begin(), out.end());
    return out;
  }

 private:
  BigUint shl_bits(int s) const {
    if (s == 0 || is_zero()) return *this;
    BigUint r;
    r.limbs_.assign(limbs_.size() + 1, 0);
    for (std::size_t i = 0; i < limbs_.size(); ++i) {
      r.limbs_[i] |= limbs_[i] << s;
      r.limbs_[i + 1] = s ? static_cast<std::uint32_t>(
                                static_cast<std::uint64_t>(limbs_[i]) >> (32 - s))
                          : 0;
    }
    r.trim();
    return r;
  }
  BigUint shr_bits(int s) const {
    if (s == 0 || is_zero()) return *this;
    BigUint r;
    r.limbs_.assign(limbs_.size(), 0);
    for (std::size_t i = 0; i < limbs_.size(); ++i) {
      r.limbs_[i] = limbs_[i] >> s;
      if (i + 1 < limbs_.size())
        r.limbs_[i] |= static_cast<std::uint32_t>(
            static_cast<std::uint64_t>(limbs_[i + 1]) << (32 - s));
    }
    r.trim();
    return r;
  }
  void trim() {
    while (!limbs_.empty() && limbs_.back() == 0) limbs_.pop_back();
  }

  std::vector<std::uint32_t> limbs_;
};

}  // namespace ggt
