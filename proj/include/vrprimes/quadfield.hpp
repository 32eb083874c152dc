#ifndef VRPRIMES_QUADFIELD_HPP
#define VRPRIMES_QUADFIELD_HPP

// Arithmetic in the ring of integers of an imaginary quadratic field Q(sqrt d).
//
// Elements are written (x + y sqrt d)/2 with x = y d (mod 2), so one formula
// covers d = 0 and d = 1 mod 4. Ideals are Z-modules a Z + (b + sqrt d)/2 Z
// with b^2 = d (mod 4a), i.e. the ideal attached to the form (a, b, c).

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "vrprimes/arith.hpp"

namespace vrprimes {

inline bool is_squarefree(std::uint64_t m)
{
	if (m == 0)
		return false;
	for (std::uint64_t q = 2; q * q <= m; ++q) {
		if (m % (q * q) == 0)
			return false;
		if (m % q == 0)
			m /= q;
	}
	return true;
}

/// True when d < 0 is the discriminant of an imaginary quadratic field.
inline bool is_fundamental(std::int64_t d)
{
	if (d >= 0)
		return false;
	std::uint64_t const n = static_cast<std::uint64_t>(-d);
	if (n % 4 == 3) // d = 1 mod 4
		return is_squarefree(n);
	if (n % 4 != 0)
		return false;
	// d = 4m, m = 2 or 3 mod 4, i.e. -m = 2 or 1 mod 4
	std::uint64_t const m = n / 4;
	if (m % 4 != 1 && m % 4 != 2)
		return false;
	return is_squarefree(m);
}

/// A negative fundamental discriminant.
class FundamentalDiscriminant {
public:
	explicit FundamentalDiscriminant(std::int64_t d)
	    : d_(d)
	{
		if (!is_fundamental(d))
			throw std::invalid_argument(std::to_string(d) + " is not a negative fundamental discriminant");
	}

	std::int64_t value() const noexcept { return d_; }
	std::uint64_t abs() const noexcept { return static_cast<std::uint64_t>(-d_); }

	/// Number of roots of unity in the ring of integers.
	unsigned units() const noexcept { return d_ == -3 ? 6 : d_ == -4 ? 4 : 2; }

	friend bool operator==(FundamentalDiscriminant, FundamentalDiscriminant) = default;

private:
	std::int64_t d_;
};

/// All fundamental d < 0 with |d| <= limit, ascending in |d|.
inline std::vector<FundamentalDiscriminant> enumerate_fundamental(std::uint64_t limit)
{
	std::vector<FundamentalDiscriminant> out;
	for (std::uint64_t n = 3; n <= limit; ++n) {
		if (is_fundamental(-static_cast<std::int64_t>(n)))
			out.emplace_back(-static_cast<std::int64_t>(n));
	}
	return out;
}

/// Class number by counting reduced forms (a, b, c) of discriminant d:
/// |b| <= a <= c, b >= 0 whenever |b| = a or a = c.
inline std::uint64_t class_number(FundamentalDiscriminant d)
{
	std::int64_t const n = static_cast<std::int64_t>(d.abs());
	std::uint64_t h = 0;
	// 3a^2 <= |d| for reduced forms
	for (std::int64_t a = 1; 3 * a * a <= n; ++a) {
		std::int64_t const four_a = 4 * a;
		// b = d (mod 2), b in (-a, a]
		for (std::int64_t b = -a + 1; b <= a; ++b) {
			if (((b - d.value()) & 1) != 0)
				continue;
			std::int64_t const num = b * b + n; // b^2 - d
			if (num % four_a != 0)
				continue;
			std::int64_t const c = num / four_a;
			if (c < a)
				continue;
			if (b < 0 && a == c)
				continue;
			++h;
		}
	}
	return h;
}

/// The element (x + y sqrt d)/2.
struct QuadInt {
	WideInt x;
	WideInt y;
	std::int64_t d = -4;

	QuadInt() = default;
	QuadInt(WideInt x_, WideInt y_, std::int64_t d_)
	    : x(std::move(x_))
	    , y(std::move(y_))
	    , d(d_)
	{
		WideInt const parity = x - y * static_cast<long>(d);
		if (!mpz_even_p(parity.get_mpz_t()))
			throw std::invalid_argument("QuadInt: x and y*d must have the same parity");
	}

	static QuadInt one(std::int64_t d) { return QuadInt(2, 0, d); }

	WideInt norm() const { return (x * x - y * y * static_cast<long>(d)) / 4; }

	QuadInt conjugate() const { return QuadInt(x, -y, d); }

	friend QuadInt operator*(QuadInt const& u, QuadInt const& v)
	{
		// ((x1 + y1 s)(x2 + y2 s))/4 with s^2 = d, rescaled to the /2 form
		WideInt const x = (u.x * v.x + u.y * v.y * static_cast<long>(u.d)) / 2;
		WideInt const y = (u.x * v.y + u.y * v.x) / 2;
		return QuadInt(x, y, u.d);
	}

	friend QuadInt operator+(QuadInt const& u, QuadInt const& v) { return QuadInt(u.x + v.x, u.y + v.y, u.d); }

	friend bool operator==(QuadInt const& u, QuadInt const& v) { return u.d == v.d && u.x == v.x && u.y == v.y; }
};

/// The units of the ring of integers, as QuadInts.
inline std::vector<QuadInt> unit_group(FundamentalDiscriminant d)
{
	std::int64_t const dv = d.value();
	if (dv == -4)
		return {QuadInt(2, 0, dv), QuadInt(-2, 0, dv), QuadInt(0, 1, dv), QuadInt(0, -1, dv)};
	if (dv == -3) {
		std::vector<QuadInt> out;
		for (int sx : {1, -1})
			for (int sy : {1, -1})
				out.emplace_back(sx, sy, dv); // (+-1 +- sqrt -3)/2
		out.emplace_back(2, 0, dv);
		out.emplace_back(-2, 0, dv);
		return out;
	}
	return {QuadInt(2, 0, dv), QuadInt(-2, 0, dv)};
}

/// The ideal a Z + (b + sqrt d)/2 Z.
struct IdealRep {
	WideInt a;
	WideInt b;
	std::int64_t d = -4;

	bool contains(QuadInt const& alpha) const
	{
		// alpha = u a + v (b + sqrt d)/2  =>  v = y, u = (x - y b) / (2a)
		WideInt const num = alpha.x - alpha.y * b;
		WideInt const den = 2 * a;
		return mpz_divisible_p(num.get_mpz_t(), den.get_mpz_t()) != 0;
	}
};

/// The prime ideal (p, b) above a split p, with b the smaller of the two
/// solutions of b^2 = d (mod 4p) in [0, 2p) having b = d (mod 2).
inline IdealRep prime_above(FundamentalDiscriminant d, PrimeCtx const& ctx)
{
	std::int64_t const p = static_cast<std::int64_t>(ctx.p());
	if (kronecker(d.value(), p) != 1)
		throw NotSplit(std::to_string(p) + " does not split in Q(sqrt " + std::to_string(d.value()) + ")");
	std::int64_t const r = static_cast<std::int64_t>(sqrt_mod_p(to_residue(d.value(), ctx.p()), ctx));
	auto lift = [&](std::int64_t root) {
		// the unique b in [0, 2p) with b = root mod p and b = d mod 2
		return ((root - d.value()) & 1) == 0 ? root : root + p;
	};
	std::int64_t const b1 = lift(r);
	std::int64_t const b2 = lift((p - r) % p);
	return IdealRep{p, std::min(b1, b2), d.value()};
}

/// The other prime above p: (p, -b) normalized into [0, 2p).
inline IdealRep conjugate_ideal(IdealRep const& ideal)
{
	WideInt b = -ideal.b;
	WideInt const two_a = 2 * ideal.a;
	mpz_fdiv_r(b.get_mpz_t(), b.get_mpz_t(), two_a.get_mpz_t());
	return IdealRep{ideal.a, b, ideal.d};
}

namespace detail {

// Round-to-nearest quotient used by Gauss reduction: k with b + 2ak in (-a, a].
inline WideInt reduction_shift(WideInt const& a, WideInt const& b)
{
	WideInt const num = a - b;
	WideInt const den = 2 * a;
	WideInt k;
	mpz_fdiv_q(k.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
	return k;
}

} // namespace detail

/// Result of Gauss-Lagrange reduction of the norm form of a rank-2 lattice.
struct ReducedBasis {
	// reduced form coefficients
	WideInt a, b, c;
	// coordinates of the two basis vectors in the input basis
	WideInt v1x, v1y, v2x, v2y;
};

/// Gauss-Lagrange reduction of a positive definite form a x^2 + b xy + c y^2,
/// tracking the change of basis.
inline ReducedBasis gauss_reduce(WideInt a, WideInt b, WideInt c)
{
	ReducedBasis r{a, b, c, 1, 0, 0, 1};
	for (;;) {
		if (r.b <= -r.a || r.b > r.a) {
			// x -> x + k y
			WideInt const k = detail::reduction_shift(r.a, r.b);
			r.c += k * (r.b + r.a * k);
			r.b += 2 * r.a * k;
			r.v2x += k * r.v1x;
			r.v2y += k * r.v1y;
		}
		if (r.a > r.c) {
			// (a, b, c) -> (c, -b, a)
			std::swap(r.a, r.c);
			r.b = -r.b;
			WideInt const tx = r.v1x, ty = r.v1y;
			r.v1x = r.v2x;
			r.v1y = r.v2y;
			r.v2x = -tx;
			r.v2y = -ty;
			continue;
		}
		break;
	}
	return r;
}

/// A generator alpha of the principal ideal ideal^h with N(alpha) = p^h.
/// Throws NotPrincipal when ideal^h is not principal.
inline QuadInt generator_of_ideal_power(IdealRep const& ideal, std::uint64_t h, PrimeCtx const& ctx)
{
	std::int64_t const d = ideal.d;
	if (h == 0)
		return QuadInt::one(d);

	WideInt const ph = wide_pow(ctx.p(), h);
	WideInt bh = hensel_sqrt(d, to_residue(ideal.b, ctx.p()), ctx, ph);
	if (((bh - d) % 2) != 0)
		bh += ph;
	// a = p^h, c = (b^2 - d) / 4a; the norm of u a + v (b + sqrt d)/2 is a f(u, v)
	WideInt const c = (bh * bh - d) / (4 * ph);
	ReducedBasis const red = gauss_reduce(ph, bh, c);
	if (red.a != 1)
		throw NotPrincipal("ideal power is not principal: reduced form has a = " + to_decimal(red.a));
	// alpha = u p^h + v (b_h + sqrt d)/2 = (2 u p^h + v b_h + v sqrt d)/2
	QuadInt alpha(2 * red.v1x * ph + red.v1y * bh, red.v1y, d);
	return alpha;
}

/// A fixed square root of d modulo p^2 whose reduction lies in [0, p/2].
inline residue_t sqrt_d_mod_p2(std::int64_t d, PrimeCtx const& ctx)
{
	if (kronecker(d, static_cast<std::int64_t>(ctx.p())) != 1)
		throw NotSplit(std::to_string(ctx.p()) + " does not split in Q(sqrt " + std::to_string(d) + ")");
	residue_t const r0 = sqrt_mod_p(to_residue(d, ctx.p()), ctx);
	return hensel_sqrt(d, r0, ctx, WideInt(static_cast<unsigned long>(ctx.p2()))).get_ui();
}

/// Images of an element under the two maps O -> Z/p^2, sqrt d -> +r and -r.
struct ResiduePair {
	residue_t plus = 0;
	residue_t minus = 0;
};

inline ResiduePair residue_pair(QuadInt const& alpha, residue_t root, PrimeCtx const& ctx)
{
	residue_t const m = ctx.p2();
	residue_t const x = to_residue(alpha.x, m);
	residue_t const yr = detail::mulmod(to_residue(alpha.y, m), root % m, m);
	return ResiduePair{detail::mulmod(detail::addmod(x, yr, m), ctx.inv2_p2(), m),
	                   detail::mulmod(detail::submod(x, yr, m), ctx.inv2_p2(), m)};
}

inline ResiduePair residue_pair(QuadInt const& alpha, PrimeCtx const& ctx)
{
	return residue_pair(alpha, sqrt_d_mod_p2(alpha.d, ctx), ctx);
}

} // namespace vrprimes

#endif // VRPRIMES_QUADFIELD_HPP
