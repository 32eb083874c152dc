#ifndef VRPRIMES_TESTS_ORACLES_HPP
#define VRPRIMES_TESTS_ORACLES_HPP

// Slow, independent reference computations used only by the tests. None of
// these share code paths with the library.

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <vector>

#include <gmpxx.h>

namespace oracle {

/// Exact Bernoulli numbers B_0..B_n with B_1 = -1/2, via the Akiyama-Tanigawa
/// transform (which yields B_1 = +1/2; the sign is flipped afterwards).
inline std::vector<mpq_class> bernoulli_exact(unsigned n)
{
	std::vector<mpq_class> out(n + 1);
	std::vector<mpq_class> a(n + 1);
	for (unsigned m = 0; m <= n; ++m) {
		a[m] = mpq_class(1, m + 1);
		for (unsigned j = m; j >= 1; --j) {
			a[j - 1] = mpq_class(j) * (a[j - 1] - a[j]);
			a[j - 1].canonicalize();
		}
		out[m] = a[0];
	}
	if (n >= 1)
		out[1] = -out[1];
	return out;
}

/// Exact Euler numbers E_0..E_n (E_2 = -1, E_4 = 5, ...) from the
/// Seidel boustrophedon triangle, which produces the unsigned zigzag numbers.
inline std::vector<mpz_class> euler_exact(unsigned n)
{
	std::vector<mpz_class> zigzag(n + 1);
	std::vector<mpz_class> row{1};
	zigzag[0] = 1;
	for (unsigned k = 1; k <= n; ++k) {
		std::vector<mpz_class> next(k + 1);
		next[0] = 0;
		for (unsigned j = 1; j <= k; ++j)
			next[j] = next[j - 1] + row[k - j];
		zigzag[k] = next[k];
		row = std::move(next);
	}
	std::vector<mpz_class> out(n + 1);
	for (unsigned k = 0; k <= n; k += 2)
		out[k] = (k / 2) % 2 == 0 ? zigzag[k] : mpz_class(-zigzag[k]);
	return out;
}

/// q mod p for a rational with denominator prime to p.
inline std::uint64_t reduce(mpq_class const& q, std::uint64_t p)
{
	mpz_class const m(static_cast<unsigned long>(p));
	mpz_class num = q.get_num() % m;
	if (num < 0)
		num += m;
	mpz_class inv;
	mpz_invert(inv.get_mpz_t(), q.get_den().get_mpz_t(), m.get_mpz_t());
	mpz_class r = (num * inv) % m;
	return r.get_ui();
}

inline std::uint64_t reduce(mpz_class const& z, std::uint64_t p) { return reduce(mpq_class(z), p); }

/// Legendre symbol by exhaustive search for a square root.
inline int legendre_brute(std::int64_t a, std::uint64_t p)
{
	std::int64_t const r = ((a % static_cast<std::int64_t>(p)) + static_cast<std::int64_t>(p)) % static_cast<std::int64_t>(p);
	if (r == 0)
		return 0;
	for (std::uint64_t x = 1; x < p; ++x)
		if ((x * x) % p == static_cast<std::uint64_t>(r))
			return 1;
	return -1;
}

/// Every x in [0, m) with x = r0 (mod p) and x^2 = a (mod m).
inline std::vector<std::uint64_t> sqrt_lifts_brute(std::int64_t a, std::uint64_t r0, std::uint64_t p, std::uint64_t m)
{
	std::int64_t const am = ((a % static_cast<std::int64_t>(m)) + static_cast<std::int64_t>(m)) % static_cast<std::int64_t>(m);
	std::vector<std::uint64_t> out;
	for (std::uint64_t x = r0 % p; x < m; x += p)
		if ((static_cast<unsigned __int128>(x) * x) % m == static_cast<std::uint64_t>(am))
			out.push_back(x);
	return out;
}

/// (d|a) for a >= 1 and d = 0, 1 mod 4, from prime factors of a: the Legendre
/// symbol by brute force at odd primes and the d mod 8 rule at 2.
inline int kronecker_small(std::int64_t d, std::int64_t a)
{
	auto at_prime = [d](std::int64_t q) {
		if (q != 2)
			return legendre_brute(d, static_cast<std::uint64_t>(q));
		std::int64_t const m8 = ((d % 8) + 8) % 8;
		return d % 2 == 0 ? 0 : (m8 == 1 || m8 == 7) ? 1 : -1;
	};
	int result = 1;
	std::int64_t rest = a;
	for (std::int64_t q = 2; q * q <= rest; ++q)
		while (rest % q == 0) {
			rest /= q;
			result *= at_prime(q);
		}
	if (rest > 1)
		result *= at_prime(rest);
	return result;
}

/// Class number from h = (w / 2|d|) |sum_{a=1}^{|d|-1} chi(a) a|, with chi(a)
/// evaluated by multiplicativity over the factorization of a.
inline std::uint64_t class_number_analytic(std::int64_t d)
{
	std::int64_t const n = -d;
	std::int64_t sum = 0;
	for (std::int64_t a = 1; a < n; ++a)
		sum += kronecker_small(d, a) * a;
	std::int64_t const w = d == -3 ? 6 : d == -4 ? 4 : 2;
	return static_cast<std::uint64_t>(w * std::llabs(sum) / (2 * n));
}

/// Smallest nonzero value of a x^2 + b xy + c y^2 by enumeration.
inline mpz_class form_minimum_brute(long a, long b, long c)
{
	// for positive definite forms, 4a f(x,y) = (2ax + by)^2 + |D| y^2, so with
	// the candidate f(1,0) = a it suffices to take |y| <= 2a / sqrt|D|
	long const disc = 4 * a * c - b * b;
	long ymax = 0;
	while (static_cast<__int128>(ymax + 1) * (ymax + 1) * disc <= static_cast<__int128>(4) * a * a)
		++ymax;
	std::optional<__int128> best;
	for (long y = -ymax; y <= ymax; ++y) {
		// x near -b y / 2a
		long const x0 = static_cast<long>(std::floor(-static_cast<double>(b) * y / (2.0 * a)));
		for (long x = x0 - 1; x <= x0 + 2; ++x) {
			if (x == 0 && y == 0)
				continue;
			__int128 const v = static_cast<__int128>(a) * x * x + static_cast<__int128>(b) * x * y + static_cast<__int128>(c) * y * y;
			if (!best || v < *best)
				best = v;
		}
	}
	return mpz_class(static_cast<long>(*best));
}

/// Partition numbers p(0..n).
inline std::vector<std::int64_t> partitions(unsigned n)
{
	std::vector<std::int64_t> p(n + 1, 0);
	p[0] = 1;
	for (unsigned part = 1; part <= n; ++part)
		for (unsigned k = part; k <= n; ++k)
			p[k] += p[k - part];
	return p;
}

/// Coefficients of prod_{g in degrees} (1 + q^g) up to degree n, by subset counting.
inline std::vector<std::int64_t> distinct_part_counts(std::vector<unsigned> const& degrees, unsigned n)
{
	std::vector<std::int64_t> c(n + 1, 0);
	c[0] = 1;
	for (unsigned g : degrees)
		for (unsigned k = n; g >= 1 && k >= g; --k)
			c[k] += c[k - g];
	return c;
}

} // namespace oracle

#endif // VRPRIMES_TESTS_ORACLES_HPP
