#ifndef VRPRIMES_VERYREGULAR_HPP
#define VRPRIMES_VERYREGULAR_HPP

// Decision procedure for very regular primes of an imaginary quadratic field.
//
// For a split prime p = P Pbar of F = Q(sqrt d) with class number h, p is very
// regular iff
//   (1) p is a regular prime (p does not divide zeta(-1), ..., zeta(4-p)),
//   (2) p does not divide L(chi_d, -2), ..., L(chi_d, 3-p),
//   (3) the image of P^h in (1 + Pbar)/(1 + Pbar^2) is nontrivial. If
//       P^h = (alpha), that image is alpha^(p-1) read in O/Pbar^2 = Z/p^2.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "vrprimes/arith.hpp"
#include "vrprimes/bernoulli.hpp"
#include "vrprimes/quadfield.hpp"

namespace vrprimes {

enum class Verdict { VeryRegular, NotVeryRegular, NotApplicable };

inline char const* to_string(Verdict v)
{
	switch (v) {
	case Verdict::VeryRegular:
		return "VeryRegular";
	case Verdict::NotVeryRegular:
		return "NotVeryRegular";
	case Verdict::NotApplicable:
		return "NotApplicable";
	}
	return "?";
}

struct VRReport {
	std::int64_t d = 0;
	std::uint64_t p = 0;
	bool split = false;
	std::vector<int> zeta_witnesses; // odd 2n-1: p | zeta(1-2n)
	std::vector<int> l_witnesses;    // even 2n: p | L(chi, -2n)
	std::optional<bool> artin_ok;    // unset when not split
	Verdict verdict = Verdict::NotApplicable;

	/// Cell text in the layout of the published table: blank, a tick, or
	/// ascending witnesses with a trailing cross for a failed Artin condition.
	std::string cell() const;
};

inline std::string VRReport::cell() const
{
	if (!split)
		return "";
	if (verdict == Verdict::VeryRegular)
		return "✓";
	std::vector<int> all = zeta_witnesses;
	all.insert(all.end(), l_witnesses.begin(), l_witnesses.end());
	std::sort(all.begin(), all.end());
	std::string out;
	for (std::size_t i = 0; i < all.size(); ++i) {
		if (i)
			out += ',';
		out += std::to_string(all[i]);
	}
	if (artin_ok.has_value() && !*artin_ok)
		out += out.empty() ? "✗" : ", ✗";
	return out;
}

inline void to_json(nlohmann::json& j, VRReport const& r)
{
	j = nlohmann::json{{"d", r.d},
	                   {"p", r.p},
	                   {"split", r.split},
	                   {"zeta_witnesses", r.zeta_witnesses},
	                   {"l_witnesses", r.l_witnesses},
	                   {"artin_ok", r.artin_ok.has_value() ? nlohmann::json(*r.artin_ok) : nlohmann::json(nullptr)},
	                   {"verdict", to_string(r.verdict)}};
}

/// Everything computed along the way to condition (3); exposed for tests.
struct ArtinDetail {
	std::uint64_t h = 0;
	IdealRep ideal;
	QuadInt alpha;
	residue_t root = 0; // sqrt d mod p^2 defining the residue maps
	ResiduePair residues;
	residue_t unit = 0; // the residue of alpha that is a unit mod p
	bool ok = false;
};

namespace detail {

inline void require_prime_to_units(FundamentalDiscriminant d, PrimeCtx const& ctx)
{
	if (d.units() % ctx.p() == 0)
		throw std::domain_error("artin_condition: p divides the number of roots of unity");
}

} // namespace detail

/// Condition (3) evaluated on an explicit element alpha generating P^h.
inline ArtinDetail artin_from_generator(QuadInt const& alpha, residue_t root, PrimeCtx const& ctx)
{
	ArtinDetail out;
	out.alpha = alpha;
	out.root = root;
	out.residues = residue_pair(alpha, root, ctx);
	bool const plus_unit = out.residues.plus % ctx.p() != 0;
	bool const minus_unit = out.residues.minus % ctx.p() != 0;
	if (plus_unit == minus_unit)
		throw InternalInconsistency("artin_condition: expected exactly one unit residue, got " +
		                            std::to_string(out.residues.plus) + " and " + std::to_string(out.residues.minus));
	out.unit = plus_unit ? out.residues.plus : out.residues.minus;
	out.ok = powmod(out.unit, ctx.p() - 1, ctx.p2()) != 1;
	return out;
}

/// Condition (3) for the prime `ideal` above p, with class number h supplied.
inline ArtinDetail artin_detail(FundamentalDiscriminant d, IdealRep const& ideal, std::uint64_t h, PrimeCtx const& ctx)
{
	detail::require_prime_to_units(d, ctx);
	QuadInt const alpha = generator_of_ideal_power(ideal, h, ctx);
	ArtinDetail out = artin_from_generator(alpha, sqrt_d_mod_p2(d.value(), ctx), ctx);
	out.h = h;
	out.ideal = ideal;
	return out;
}

inline ArtinDetail artin_detail(FundamentalDiscriminant d, PrimeCtx const& ctx)
{
	return artin_detail(d, prime_above(d, ctx), class_number(d), ctx);
}

inline bool artin_condition(FundamentalDiscriminant d, PrimeCtx const& ctx)
{
	return artin_detail(d, ctx).ok;
}

/// Two squares p = a^2 + b^2 for p = 1 mod 4, with 0 < a < b.
inline std::pair<std::uint64_t, std::uint64_t> two_squares(std::uint64_t p)
{
	for (std::uint64_t a = 1; 2 * a * a < p; ++a) {
		std::uint64_t const rest = p - a * a;
		std::uint64_t b = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(rest)));
		while (b * b > rest)
			--b;
		while ((b + 1) * (b + 1) <= rest)
			++b;
		if (b * b == rest)
			return {a, b};
	}
	throw InternalInconsistency("two_squares: no representation for " + std::to_string(p));
}

/// Condition (3) for Q(i) in closed form: (4ab)^(p-1) != 1 mod p^2 where p = a^2 + b^2.
inline bool artin_condition_gaussian(PrimeCtx const& ctx)
{
	if (ctx.p() % 4 != 1)
		throw NotOneModFour(std::to_string(ctx.p()) + " is not 1 mod 4");
	auto const [a, b] = two_squares(ctx.p());
	residue_t const base = (4 * a * b) % ctx.p2();
	return powmod(base, ctx.p() - 1, ctx.p2()) != 1;
}

/// Full verdict with all three conditions evaluated (no short-circuit).
/// `h` may be supplied when the caller already knows the class number.
inline VRReport very_regular(FundamentalDiscriminant d, PrimeTables const& tables, std::optional<std::uint64_t> h = std::nullopt)
{
	PrimeCtx const& ctx = tables.ctx;
	VRReport r;
	r.d = d.value();
	r.p = ctx.p();
	r.split = kronecker(d.value(), static_cast<std::int64_t>(ctx.p())) == 1;
	if (!r.split) {
		r.verdict = Verdict::NotApplicable;
		return r;
	}
	r.zeta_witnesses = is_regular(tables.bernoulli).witnesses;
	// for p = 3 the range 2 <= 2n <= p - 3 is empty; skip building the character table
	if (ctx.p() > 3)
		r.l_witnesses = l_condition(QuadChar(d.value()), tables).witnesses;
	std::uint64_t const hh = h ? *h : class_number(d);
	r.artin_ok = artin_detail(d, prime_above(d, ctx), hh, ctx).ok;
	bool const vr = r.zeta_witnesses.empty() && r.l_witnesses.empty() && *r.artin_ok;
	r.verdict = vr ? Verdict::VeryRegular : Verdict::NotVeryRegular;
	return r;
}

inline VRReport very_regular(FundamentalDiscriminant d, PrimeCtx const& ctx)
{
	return very_regular(d, PrimeTables(ctx));
}

/// |d| of every fundamental discriminant with |d| <= limit for which p is very regular.
inline std::vector<std::uint64_t> list_very_regular_discriminants(PrimeCtx const& ctx, std::uint64_t limit)
{
	PrimeTables const tables(ctx);
	std::vector<std::uint64_t> out;
	for (auto const& d : enumerate_fundamental(limit)) {
		if (very_regular(d, tables).verdict == Verdict::VeryRegular)
			out.push_back(d.abs());
	}
	return out;
}

} // namespace vrprimes

#endif // VRPRIMES_VERYREGULAR_HPP
