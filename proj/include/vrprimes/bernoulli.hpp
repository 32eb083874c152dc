#ifndef VRPRIMES_BERNOULLI_HPP
#define VRPRIMES_BERNOULLI_HPP

// Bernoulli numbers, Euler numbers and generalized Bernoulli numbers B_{n,chi}
// reduced modulo an odd prime p, plus the two L-value divisibility tests
// built on top of them.
//
// Conventions: B_1 = -1/2 (generating function t/(e^t - 1)); E_n from
// 2/(e^t + e^-t). Only indices below p - 1 are representable, since B_{p-1}
// has p in its denominator.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "vrprimes/arith.hpp"

namespace vrprimes {

/// Factorials and inverse factorials mod p for arguments below p.
class BinomialTable {
public:
	explicit BinomialTable(std::uint64_t p)
	    : p_(p)
	    , fact_(p)
	    , inv_fact_(p)
	{
		fact_[0] = 1;
		for (std::uint64_t i = 1; i < p; ++i)
			fact_[i] = detail::mulmod(fact_[i - 1], i, p);
		inv_fact_[p - 1] = invmod(fact_[p - 1], p);
		for (std::uint64_t i = p - 1; i > 0; --i)
			inv_fact_[i - 1] = detail::mulmod(inv_fact_[i], i, p);
	}

	/// C(n, k) mod p for 0 <= k <= n < p.
	residue_t operator()(std::uint64_t n, std::uint64_t k) const
	{
		if (k > n)
			return 0;
		return detail::mulmod(detail::mulmod(fact_[n], inv_fact_[k], p_), inv_fact_[n - k], p_);
	}

	/// 1/n mod p for 0 < n < p.
	residue_t inverse(std::uint64_t n) const
	{
		return detail::mulmod(inv_fact_[n], fact_[n - 1], p_);
	}

	std::uint64_t p() const noexcept { return p_; }

private:
	std::uint64_t p_;
	std::vector<residue_t> fact_;
	std::vector<residue_t> inv_fact_;
};

/// B_k mod p for 0 <= k <= p - 2. Odd k > 1 read back as zero.
class BernoulliTable {
public:
	BernoulliTable(std::uint64_t p, BinomialTable const& binom)
	    : p_(p)
	    , values_(p >= 3 ? p - 1 : 0, 0)
	{
		// sum_{k=0}^{m} C(m+1, k) B_k = 0 for m >= 1
		values_[0] = 1;
		if (p - 1 > 1)
			values_[1] = p - binom.inverse(2); // -1/2
		for (std::uint64_t m = 2; m + 1 < p - 1; ++m) {
			if (m & 1U)
				continue;
			residue_t acc = 0;
			for (std::uint64_t k = 0; k < m; ++k) {
				if (k > 1 && (k & 1U))
					continue;
				acc = detail::addmod(acc, detail::mulmod(binom(m + 1, k), values_[k], p), p);
			}
			values_[m] = detail::mulmod(acc == 0 ? 0 : p - acc, binom.inverse(m + 1), p);
		}
	}

	explicit BernoulliTable(std::uint64_t p)
	    : BernoulliTable(p, BinomialTable(p))
	{
	}

	std::uint64_t p() const noexcept { return p_; }

	residue_t at(std::uint64_t k) const
	{
		if (k + 1 >= p_)
			throw std::out_of_range("BernoulliTable: B_" + std::to_string(k) + " is not p-integral for p = " + std::to_string(p_));
		return values_[k];
	}

	/// Largest even index stored, p - 3.
	std::uint64_t max_even_index() const noexcept { return p_ - 3; }

private:
	std::uint64_t p_;
	std::vector<residue_t> values_;
};

/// E_k mod p for even 0 <= k <= p - 3.
class EulerTable {
public:
	EulerTable(std::uint64_t p, BinomialTable const& binom)
	    : p_(p)
	    , values_((p - 1) / 2, 0)
	{
		// sum_{j=0}^{n} C(2n, 2j) E_{2j} = 0 for n >= 1
		values_[0] = 1;
		for (std::uint64_t n = 1; 2 * n + 3 <= p; ++n) {
			residue_t acc = 0;
			for (std::uint64_t j = 0; j < n; ++j)
				acc = detail::addmod(acc, detail::mulmod(binom(2 * n, 2 * j), values_[j], p), p);
			values_[n] = acc == 0 ? 0 : p - acc;
		}
	}

	explicit EulerTable(std::uint64_t p)
	    : EulerTable(p, BinomialTable(p))
	{
	}

	residue_t at(std::uint64_t k) const
	{
		if (k & 1U)
			return 0;
		if (k + 3 > p_)
			throw std::out_of_range("EulerTable: index " + std::to_string(k) + " exceeds p - 3");
		return values_[k / 2];
	}

private:
	std::uint64_t p_;
	std::vector<residue_t> values_;
};

/// Everything that depends only on p. Immutable after construction, so one
/// instance can be shared by concurrent workers.
struct PrimeTables {
	explicit PrimeTables(PrimeCtx const& c)
	    : ctx(c)
	    , binom(c.p())
	    , bernoulli(c.p(), binom)
	    , euler(c.p(), binom)
	{
	}

	PrimeCtx ctx;
	BinomialTable binom;
	BernoulliTable bernoulli;
	EulerTable euler;
};

/// The quadratic character attached to a negative discriminant, chi(a) = (d|a).
class QuadChar {
public:
	explicit QuadChar(std::int64_t d)
	    : d_(d)
	    , f_(static_cast<std::uint64_t>(d < 0 ? -d : d))
	    , values_(f_)
	{
		if (d >= 0)
			throw std::invalid_argument("QuadChar: discriminant must be negative");
		for (std::uint64_t a = 0; a < f_; ++a)
			values_[a] = static_cast<std::int8_t>(kronecker(d, static_cast<std::int64_t>(a)));
	}

	std::int64_t discriminant() const noexcept { return d_; }
	std::uint64_t conductor() const noexcept { return f_; }

	int operator()(std::int64_t a) const
	{
		std::int64_t const f = static_cast<std::int64_t>(f_);
		std::int64_t r = a % f;
		if (r < 0)
			r += f;
		return values_[static_cast<std::size_t>(r)];
	}

private:
	std::int64_t d_;
	std::uint64_t f_;
	std::vector<std::int8_t> values_;
};

/// Verdict of a divisibility test together with the offending indices, ascending.
struct WitnessResult {
	bool holds = true;
	std::vector<int> witnesses;
};

/// Kummer regularity. A witness 2n-1 records p | zeta(1-2n), i.e. p | B_{2n}.
inline WitnessResult is_regular(BernoulliTable const& table)
{
	WitnessResult out;
	for (std::uint64_t k = 2; k + 3 <= table.p(); k += 2) {
		if (table.at(k) == 0)
			out.witnesses.push_back(static_cast<int>(k) - 1);
	}
	out.holds = out.witnesses.empty();
	return out;
}

inline WitnessResult is_regular(std::uint64_t p)
{
	PrimeCtx const ctx(p);
	return is_regular(BernoulliTable(ctx.p()));
}

/// B_n(x) mod p by Horner's rule; n <= p - 2.
inline residue_t bernoulli_poly_mod_p(std::uint64_t n, residue_t x, BernoulliTable const& table, BinomialTable const& binom)
{
	std::uint64_t const p = table.p();
	// B_n(x) = sum_j C(n, j) B_{n-j} x^j
	residue_t acc = 0;
	for (std::uint64_t j = n + 1; j-- > 0;) {
		std::uint64_t const k = n - j;
		residue_t const bk = (k > 1 && (k & 1U)) ? 0 : table.at(k);
		acc = detail::addmod(detail::mulmod(acc, x, p), detail::mulmod(binom(n, j), bk, p), p);
	}
	return acc;
}

namespace detail {

inline void require_coprime_conductor(QuadChar const& chi, std::uint64_t p)
{
	if (chi.conductor() % p == 0)
		throw ConductorNotCoprime("conductor " + std::to_string(chi.conductor()) + " is divisible by p = " + std::to_string(p));
}

} // namespace detail

/// B_{n,chi} mod p = f^{n-1} sum_{a=1}^{f} chi(a) B_n(a/f). Requires 1 <= n <= p - 2.
inline residue_t gen_bernoulli_mod_p(std::uint64_t n, QuadChar const& chi, PrimeTables const& tables)
{
	std::uint64_t const p = tables.ctx.p();
	detail::require_coprime_conductor(chi, p);
	if (n + 2 > p)
		throw std::out_of_range("gen_bernoulli_mod_p: n must be at most p - 2");
	std::uint64_t const f = chi.conductor();
	residue_t const f_inv = invmod(f % p, p);
	residue_t sum = 0;
	for (std::uint64_t a = 1; a <= f; ++a) {
		int const c = chi(static_cast<std::int64_t>(a));
		if (c == 0)
			continue;
		residue_t const x = detail::mulmod(a % p, f_inv, p);
		residue_t const b = bernoulli_poly_mod_p(n, x, tables.bernoulli, tables.binom);
		sum = c > 0 ? detail::addmod(sum, b, p) : detail::submod(sum, b, p);
	}
	return detail::mulmod(powmod(f % p, n - 1, p), sum, p);
}

inline residue_t gen_bernoulli_mod_p(std::uint64_t n, QuadChar const& chi, PrimeCtx const& ctx)
{
	return gen_bernoulli_mod_p(n, chi, PrimeTables(ctx));
}

/// p does not divide L(chi, -2n) = -B_{2n+1,chi}/(2n+1) for 2 <= 2n <= p - 3.
/// A witness 2n records a failure.
///
/// Expanding B_{n}(a/f) and swapping the sums gives
///   B_{n,chi} = sum_k C(n,k) B_k f^{k-1} S_{n-k},   S_j = sum_a chi(a) a^j,
/// so all n share one pass over the residues a.
inline WitnessResult l_condition(QuadChar const& chi, PrimeTables const& tables)
{
	std::uint64_t const p = tables.ctx.p();
	detail::require_coprime_conductor(chi, p);
	WitnessResult out;
	if (p < 5)
		return out;

	std::uint64_t const f = chi.conductor();
	std::uint64_t const top = p - 2; // largest n = 2n+1 needed
	std::vector<residue_t> sums(top + 1, 0);
	for (std::uint64_t a = 1; a <= f; ++a) {
		int const c = chi(static_cast<std::int64_t>(a));
		if (c == 0)
			continue;
		residue_t const base = a % p;
		residue_t pw = 1;
		for (std::uint64_t j = 0; j <= top; ++j) {
			sums[j] = c > 0 ? detail::addmod(sums[j], pw, p) : detail::submod(sums[j], pw, p);
			pw = detail::mulmod(pw, base, p);
		}
	}
	std::vector<residue_t> f_pow(top + 1, 1);
	for (std::uint64_t k = 1; k <= top; ++k)
		f_pow[k] = detail::mulmod(f_pow[k - 1], f % p, p);
	residue_t const f_inv = invmod(f % p, p);

	for (std::uint64_t n = 3; n <= top; n += 2) {
		residue_t acc = 0;
		for (std::uint64_t k = 0; k <= n; ++k) {
			if (k > 1 && (k & 1U))
				continue;
			residue_t const fk = k == 0 ? f_inv : f_pow[k - 1];
			residue_t term = detail::mulmod(tables.binom(n, k), tables.bernoulli.at(k), p);
			term = detail::mulmod(term, fk, p);
			acc = detail::addmod(acc, detail::mulmod(term, sums[n - k], p), p);
		}
		if (acc == 0)
			out.witnesses.push_back(static_cast<int>(n) - 1);
	}
	out.holds = out.witnesses.empty();
	return out;
}

inline WitnessResult l_condition(QuadChar const& chi, PrimeCtx const& ctx)
{
	return l_condition(chi, PrimeTables(ctx));
}

} // namespace vrprimes

#endif // VRPRIMES_BERNOULLI_HPP
