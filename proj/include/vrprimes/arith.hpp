#ifndef VRPRIMES_ARITH_HPP
#define VRPRIMES_ARITH_HPP

// Modular and multi-precision integer primitives.
//
// Residues are held in 64-bit words with 128-bit intermediates, which covers
// every modulus used here (p < 2^31, so p^2 < 2^62). WideInt is GMP's mpz_class
// and only shows up where powers p^h of a prime are needed.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

#include <gmpxx.h>

#include "vrprimes/errors.hpp"

namespace vrprimes {

using residue_t = std::uint64_t;
using WideInt = mpz_class;

namespace detail {

inline residue_t mulmod(residue_t a, residue_t b, residue_t m)
{
	return static_cast<residue_t>((static_cast<unsigned __int128>(a) * b) % m);
}

inline residue_t addmod(residue_t a, residue_t b, residue_t m)
{
	unsigned __int128 s = static_cast<unsigned __int128>(a) + b;
	return static_cast<residue_t>(s >= m ? s - m : s);
}

inline residue_t submod(residue_t a, residue_t b, residue_t m)
{
	return a >= b ? a - b : a + (m - b);
}

} // namespace detail

/// Reduce a signed integer into [0, m).
inline residue_t to_residue(std::int64_t a, residue_t m)
{
	std::int64_t const sm = static_cast<std::int64_t>(m);
	std::int64_t r = a % sm;
	if (r < 0)
		r += sm;
	return static_cast<residue_t>(r);
}

inline residue_t to_residue(WideInt const& a, residue_t m)
{
	WideInt r;
	mpz_fdiv_r_ui(r.get_mpz_t(), a.get_mpz_t(), static_cast<unsigned long>(m));
	return static_cast<residue_t>(r.get_ui());
}

/// base^exp mod m, result in [0, m). m >= 2.
inline residue_t powmod(residue_t base, std::uint64_t exp, residue_t m)
{
	if (m < 2)
		throw std::invalid_argument("powmod: modulus must be at least 2");
	residue_t result = 1 % m;
	base %= m;
	while (exp != 0) {
		if (exp & 1U)
			result = detail::mulmod(result, base, m);
		base = detail::mulmod(base, base, m);
		exp >>= 1U;
	}
	return result;
}

/// Inverse of a modulo m; throws NonInvertible when gcd(a, m) != 1.
inline residue_t invmod(residue_t a, residue_t m)
{
	std::int64_t t = 0, new_t = 1;
	std::int64_t r = static_cast<std::int64_t>(m);
	std::int64_t new_r = static_cast<std::int64_t>(a % m);
	while (new_r != 0) {
		std::int64_t const q = r / new_r;
		t = std::exchange(new_t, t - q * new_t);
		r = std::exchange(new_r, r - q * new_r);
	}
	if (r != 1)
		throw NonInvertible("invmod: " + std::to_string(a) + " is not invertible mod " + std::to_string(m));
	return to_residue(t, m);
}

/// Kronecker symbol (a|n) over the full integer domain.
inline int kronecker(std::int64_t a, std::int64_t n)
{
	if (n == 0)
		return (a == 1 || a == -1) ? 1 : 0;
	int sign = 1;
	if (n < 0) {
		n = -n;
		if (a < 0)
			sign = -1;
	}
	if ((a & 1) == 0 && (n & 1) == 0)
		return 0;
	// factor out powers of two from n: (a|2) is 0 for even a, else +-1 by a mod 8
	int twos = 0;
	while ((n & 1) == 0) {
		n >>= 1;
		++twos;
	}
	if (twos & 1) {
		std::int64_t const a8 = ((a % 8) + 8) % 8;
		if (a8 == 3 || a8 == 5)
			sign = -sign;
	}
	// n is now odd and positive: Jacobi symbol
	std::int64_t x = a % n;
	if (x < 0)
		x += n;
	std::int64_t y = n;
	while (x != 0) {
		while ((x & 1) == 0) {
			x >>= 1;
			std::int64_t const y8 = y % 8;
			if (y8 == 3 || y8 == 5)
				sign = -sign;
		}
		std::swap(x, y);
		if (x % 4 == 3 && y % 4 == 3)
			sign = -sign;
		x %= y;
	}
	return y == 1 ? sign : 0;
}

/// Deterministic Miller-Rabin, exact for all n < 2^64.
inline bool is_prime(std::uint64_t n)
{
	if (n < 2)
		return false;
	static constexpr std::uint64_t small[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
	for (auto q : small) {
		if (n % q == 0)
			return n == q;
	}
	std::uint64_t dd = n - 1;
	int s = 0;
	while ((dd & 1U) == 0) {
		dd >>= 1U;
		++s;
	}
	for (auto a : small) {
		residue_t x = powmod(a, dd, n);
		if (x == 1 || x == n - 1)
			continue;
		bool composite = true;
		for (int i = 1; i < s; ++i) {
			x = detail::mulmod(x, x, n);
			if (x == n - 1) {
				composite = false;
				break;
			}
		}
		if (composite)
			return false;
	}
	return true;
}

/// An odd prime below 2^31 together with the moduli derived from it.
class PrimeCtx {
public:
	explicit PrimeCtx(std::uint64_t p)
	    : p_(p)
	    , p2_(p * p)
	{
		if (p <= 2 || p >= (std::uint64_t{1} << 31) || !is_prime(p))
			throw std::invalid_argument("PrimeCtx: " + std::to_string(p) + " is not an odd prime below 2^31");
		inv2_p2_ = (p2_ + 1) / 2;
	}

	std::uint64_t p() const noexcept { return p_; }
	std::uint64_t p2() const noexcept { return p2_; }
	/// 1/2 modulo p^2.
	residue_t inv2_p2() const noexcept { return inv2_p2_; }

private:
	std::uint64_t p_;
	std::uint64_t p2_;
	residue_t inv2_p2_;
};

/// Square root of a modulo p (Tonelli-Shanks). Returns the root in [0, p/2].
inline residue_t sqrt_mod_p(residue_t a, PrimeCtx const& ctx)
{
	std::uint64_t const p = ctx.p();
	a %= p;
	if (a == 0)
		return 0;
	if (powmod(a, (p - 1) / 2, p) != 1)
		throw NonResidue("sqrt_mod_p: " + std::to_string(a) + " is a non-residue mod " + std::to_string(p));

	std::uint64_t q = p - 1;
	int s = 0;
	while ((q & 1U) == 0) {
		q >>= 1U;
		++s;
	}
	residue_t z = 2;
	while (powmod(z, (p - 1) / 2, p) != p - 1)
		++z;

	residue_t c = powmod(z, q, p);
	residue_t r = powmod(a, (q + 1) / 2, p);
	residue_t t = powmod(a, q, p);
	int m = s;
	while (t != 1) {
		int i = 1;
		residue_t t2 = detail::mulmod(t, t, p);
		while (t2 != 1) {
			t2 = detail::mulmod(t2, t2, p);
			++i;
		}
		residue_t b = c;
		for (int j = 0; j < m - i - 1; ++j)
			b = detail::mulmod(b, b, p);
		r = detail::mulmod(r, b, p);
		c = detail::mulmod(b, b, p);
		t = detail::mulmod(t, c, p);
		m = i;
	}
	return r <= p / 2 ? r : p - r;
}

/// Floor division with a nonnegative remainder: a = q*b + r, 0 <= r < |b|.
inline std::pair<WideInt, WideInt> divrem(WideInt const& a, WideInt const& b)
{
	if (b == 0)
		throw std::domain_error("divrem: division by zero");
	WideInt q, r;
	mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
	if (r < 0) {
		// only reachable for negative b
		r -= b;
		q += 1;
	}
	return {q, r};
}

inline WideInt wide_pow(std::uint64_t base, std::uint64_t exp)
{
	WideInt r;
	mpz_ui_pow_ui(r.get_mpz_t(), base, exp);
	return r;
}

inline std::string to_decimal(WideInt const& v) { return v.get_str(10); }

inline WideInt from_decimal(std::string const& s)
{
	WideInt v;
	if (s.empty() || v.set_str(s, 10) != 0)
		throw std::invalid_argument("from_decimal: malformed integer '" + s + "'");
	return v;
}

/// Lift a square root r0 of a mod p to a square root mod target (a power of p).
/// The result is the unique root congruent to r0 mod p, reduced into [0, target).
inline WideInt hensel_sqrt(WideInt const& a, residue_t r0, PrimeCtx const& ctx, WideInt const& target)
{
	std::uint64_t const p = ctx.p();
	if (to_residue(a, p) == 0)
		throw std::invalid_argument("hensel_sqrt: p divides a");
	if (detail::mulmod(r0 % p, r0 % p, p) != to_residue(a, p))
		throw BadSeed("hensel_sqrt: seed " + std::to_string(r0) + " is not a square root mod " + std::to_string(p));

	{
		WideInt t = target;
		while (t > 1 && mpz_divisible_ui_p(t.get_mpz_t(), p))
			t /= static_cast<unsigned long>(p);
		if (t != 1)
			throw std::invalid_argument("hensel_sqrt: target is not a positive power of p");
	}

	WideInt r = r0 % p;
	WideInt m = p;
	while (m < target) {
		m *= m;
		if (m > target)
			m = target;
		// Newton step: r <- r - (r^2 - a) / (2r) mod m
		WideInt num = r * r - a;
		WideInt den = 2 * r;
		WideInt inv;
		mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), m.get_mpz_t());
		r = r - num * inv;
		mpz_fdiv_r(r.get_mpz_t(), r.get_mpz_t(), m.get_mpz_t());
	}
	return r;
}

inline WideInt hensel_sqrt(std::int64_t a, residue_t r0, PrimeCtx const& ctx, WideInt const& target)
{
	return hensel_sqrt(WideInt(static_cast<long>(a)), r0, ctx, target);
}

} // namespace vrprimes

#endif // VRPRIMES_ARITH_HPP
