#include "doctest.h"

#include "ggt/bigint.hpp"
#include "ggt/rational.hpp"
#include "ggt/rng.hpp"

using namespace ggt;

TEST_CASE("BigUint small arithmetic matches native") {
  SplitMix64 rng(42);
  for (int i = 0; i < 2000; ++i) {
    std::uint64_t a = rng.next() >> (1 + rng.below(40));
    std::uint64_t b = rng.next() >> (1 + rng.below(40));
    BigUint A(a), B(b);
    CHECK((A + B).to_u64() == a + b);
    if (a >= b) CHECK((A - B).to_u64() == a - b);
    unsigned __int128 prod = static_cast<unsigned __int128>(a) * b;
    BigUint P = A * B;
    if (prod >> 64) {
      CHECK(!P.fits_u64());
    } else {
      CHECK(P.to_u64() == static_cast<std::uint64_t>(prod));
    }
    if (b != 0) {
      auto [q, r] = BigUint::divmod(A, B);
      CHECK(q.to_u64() == a / b);
      CHECK(r.to_u64() == a % b);
    }
  }
}

TEST_CASE("BigUint divmod identity on large operands") {
  SplitMix64 rng(7);
  for (int i = 0; i < 400; ++i) {
    BigUint n(1), d(1);
    int nl = 1 + rng.below_int(6), dl = 1 + rng.below_int(4);
    for (int j = 0; j < nl; ++j) n = n * BigUint(rng.next() | 1);
    for (int j = 0; j < dl; ++j) d = d * BigUint(rng.next() | 1);
    auto [q, r] = BigUint::divmod(n, d);
    CHECK(q * d + r == n);
    CHECK(r < d);
  }
}

TEST_CASE("BigUint divmod near limb boundaries (correction branches)") {
  // operands built from extreme limb values exercise the trial-quotient
  // correction and add-back paths
  std::vector<std::uint64_t> specials{0ull,
                                      1ull,
                                      0xffffffffull,
                                      0xfffffffeull,
                                      0x100000000ull,
                                      0x100000001ull,
                                      0xffffffffffffffffull,
                                      0x8000000000000000ull,
                                      0x7fffffffffffffffull};
  for (auto a : specials)
    for (auto b : specials)
      for (auto c : specials) {
        if (c == 0) continue;
        BigUint n = BigUint(a) * BigUint(0x100000000ull) + BigUint(b);
        for (auto d0 : specials) {
          BigUint d = BigUint(c) * BigUint(0x100000000ull) + BigUint(d0);
          if (d.is_zero()) continue;
          auto [q, r] = BigUint::divmod(n, d);
          CHECK(q * d + r == n);
          CHECK(r < d);
        }
      }
}

TEST_CASE("BigUint decimal round trip") {
  SplitMix64 rng(11);
  for (int i = 0; i < 200; ++i) {
    BigUint n(1);
    for (int j = 0, e = 1 + rng.below_int(5); j < e; ++j) n = n * BigUint(rng.next());
    CHECK(BigUint::from_decimal(n.to_decimal()) == n);
  }
  CHECK(BigUint(0).to_decimal() == "0");
  CHECK(BigUint::pow(BigUint(10), 20).to_decimal() == "100000000000000000000");
}

TEST_CASE("BigUint gcd") {
  CHECK(BigUint::gcd(BigUint(12), BigUint(18)).to_u64() == 6);
  SplitMix64 rng(3);
  for (int i = 0; i < 200; ++i) {
    std::uint64_t a = rng.below(1 << 30), b = rng.below(1 << 30), g = rng.below(1 << 20) + 1;
    BigUint G = BigUint::gcd(BigUint(a) * BigUint(g), BigUint(b) * BigUint(g));
    CHECK(G.divmod_small(static_cast<std::uint32_t>(g)).second == 0);
  }
}

TEST_CASE("Rational arithmetic and normalization") {
  Rational a = Rational::make(8, 9);
  Rational b = Rational::make(208, 243);
  CHECK(a.to_string() == "8/9");
  CHECK((a * b).to_string() == "1664/2187");
  CHECK((a - a).is_zero());
  CHECK(Rational::make(-4, -6) == Rational::make(2, 3));
  CHECK(Rational::make(4, -6).to_string() == "-2/3");
  CHECK(Rational::make(26, 27) * Rational::make(24, 27) ==
        Rational::make(208, 243) * Rational::make(3, 3));
  CHECK(Rational::make(5, 1).is_integer());
  CHECK(Rational::make(5, 1).to_int() == 5);
  CHECK(Rational::make(7, 3) > Rational::make(7, 4));
  CHECK(Rational::make(-7, 3) < Rational::make(1, 1000000));
}

TEST_CASE("Rational field laws on random values") {
  SplitMix64 rng(5);
  for (int i = 0; i < 300; ++i) {
    auto rnd = [&] {
      std::int64_t n = static_cast<std::int64_t>(rng.below(2000)) - 1000;
      std::int64_t d = static_cast<std::int64_t>(rng.below(999)) + 1;
      return Rational::make(n, d);
    };
    Rational x = rnd(), y = rnd(), z = rnd();
    CHECK((x + y) * z == x * z + y * z);
    CHECK(x + y == y + x);
    CHECK((x + y) + z == x + (y + z));
    if (!y.is_zero()) CHECK(x / y * y == x);
  }
}
