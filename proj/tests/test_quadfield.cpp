#include <algorithm>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "vrprimes/quadfield.hpp"

using namespace vrprimes;

namespace {

std::vector<std::uint64_t> odd_primes_below(std::uint64_t n)
{
	std::vector<std::uint64_t> out;
	for (std::uint64_t p = 3; p < n; p += 2)
		if (is_prime(p))
			out.push_back(p);
	return out;
}

std::vector<std::uint64_t> abs_values(std::vector<FundamentalDiscriminant> const& v)
{
	std::vector<std::uint64_t> out;
	for (auto const& d : v)
		out.push_back(d.abs());
	return out;
}

} // namespace

TEST(Fundamental, Enumeration)
{
	EXPECT_EQ(abs_values(enumerate_fundamental(20)), (std::vector<std::uint64_t>{3, 4, 7, 8, 11, 15, 19, 20}));
	EXPECT_EQ(abs_values(enumerate_fundamental(24)), (std::vector<std::uint64_t>{3, 4, 7, 8, 11, 15, 19, 20, 23, 24}));
	EXPECT_FALSE(is_fundamental(-12));
	EXPECT_FALSE(is_fundamental(-16));
	EXPECT_FALSE(is_fundamental(5));
	EXPECT_THROW(FundamentalDiscriminant(-12), std::invalid_argument);
}

TEST(Fundamental, MatchesDefinition)
{
	auto squarefree = [](std::int64_t m) {
		m = m < 0 ? -m : m;
		for (std::int64_t q = 2; q * q <= m; ++q)
			if (m % (q * q) == 0)
				return false;
		return true;
	};
	auto listed = abs_values(enumerate_fundamental(3000));
	std::vector<std::uint64_t> expected;
	for (std::int64_t n = 1; n <= 3000; ++n) {
		std::int64_t const d = -n;
		bool ok = false;
		if (((d % 4) + 4) % 4 == 1)
			ok = squarefree(d);
		else if (d % 4 == 0) {
			std::int64_t const m = d / 4;
			std::int64_t const r = ((m % 4) + 4) % 4;
			ok = (r == 2 || r == 3) && squarefree(m);
		}
		if (ok)
			expected.push_back(static_cast<std::uint64_t>(n));
	}
	EXPECT_EQ(listed, expected);
}

TEST(ClassNumber, Examples)
{
	EXPECT_EQ(class_number(FundamentalDiscriminant(-3)), 1u);
	EXPECT_EQ(class_number(FundamentalDiscriminant(-4)), 1u);
	EXPECT_EQ(class_number(FundamentalDiscriminant(-11)), 1u);
	EXPECT_EQ(class_number(FundamentalDiscriminant(-19)), 1u);
	EXPECT_EQ(class_number(FundamentalDiscriminant(-23)), 3u);
	EXPECT_EQ(class_number(FundamentalDiscriminant(-163)), 1u);
	EXPECT_EQ(class_number(FundamentalDiscriminant(-47)), 5u);
}

TEST(ClassNumber, MatchesAnalyticFormula)
{
	for (auto const& d : enumerate_fundamental(1000))
		ASSERT_EQ(class_number(d), oracle::class_number_analytic(d.value())) << d.value();
}

TEST(QuadInt, Arithmetic)
{
	QuadInt const a(2, 2, -4); // (2 + 2 sqrt(-4))/2 = 1 + 2i
	EXPECT_EQ(a.norm(), 5);
	EXPECT_EQ(a.conjugate(), QuadInt(2, -2, -4));
	EXPECT_EQ(a * a.conjugate(), QuadInt(10, 0, -4));
	EXPECT_EQ(QuadInt::one(-4) * a.conjugate(), a.conjugate());
	EXPECT_THROW(QuadInt(1, 0, -4), std::invalid_argument);
	QuadInt const b(1, 1, -23);
	EXPECT_EQ(b.norm(), 6);
	EXPECT_EQ((b * b).norm(), 36);
	EXPECT_EQ((b + b), QuadInt(2, 2, -23));
}

TEST(QuadInt, UnitGroup)
{
	for (std::int64_t d : {-3, -4, -7, -23}) {
		auto const units = unit_group(FundamentalDiscriminant(d));
		EXPECT_EQ(units.size(), FundamentalDiscriminant(d).units());
		for (auto const& u : units)
			EXPECT_EQ(u.norm(), 1);
	}
}

TEST(PrimeAbove, Examples)
{
	IdealRep const i5 = prime_above(FundamentalDiscriminant(-4), PrimeCtx(5));
	EXPECT_EQ(i5.a, 5);
	EXPECT_EQ(i5.b, 4);
	IdealRep const i7 = prime_above(FundamentalDiscriminant(-3), PrimeCtx(7));
	EXPECT_EQ(i7.a, 7);
	EXPECT_EQ((i7.b * i7.b + 3) % 28, 0);
	EXPECT_EQ(i7.b % 2, 1);
	EXPECT_THROW(prime_above(FundamentalDiscriminant(-4), PrimeCtx(3)), NotSplit);
	EXPECT_THROW(prime_above(FundamentalDiscriminant(-3), PrimeCtx(3)), NotSplit);
}

TEST(PrimeAbove, NormalizationAndConjugate)
{
	for (std::uint64_t p : odd_primes_below(200))
		for (auto const& d : enumerate_fundamental(200)) {
			if (kronecker(d.value(), static_cast<std::int64_t>(p)) != 1)
				continue;
			IdealRep const P = prime_above(d, PrimeCtx(p));
			IdealRep const Q = conjugate_ideal(P);
			for (IdealRep const& I : {P, Q}) {
				ASSERT_EQ((I.b * I.b - d.value()) % (4 * I.a), 0);
				ASSERT_TRUE(I.b >= 0 && I.b < 2 * I.a);
			}
			ASSERT_NE(P.b, Q.b);
			ASSERT_LT(P.b, Q.b);
		}
}

TEST(GaussReduce, MinimalAgainstEnumeration)
{
	for (std::uint64_t p : odd_primes_below(100))
		for (auto const& d : enumerate_fundamental(24)) {
			if (kronecker(d.value(), static_cast<std::int64_t>(p)) != 1)
				continue;
			PrimeCtx const ctx(p);
			IdealRep const P = prime_above(d, ctx);
			for (std::uint64_t h = 1; wide_pow(p, h) < 1000000; ++h) {
				WideInt const ph = wide_pow(p, h);
				WideInt bh = hensel_sqrt(d.value(), to_residue(P.b, p), ctx, ph);
				if ((bh - d.value()) % 2 != 0)
					bh += ph;
				WideInt const c = (bh * bh - d.value()) / (4 * ph);
				ReducedBasis const r = gauss_reduce(ph, bh, c);
				ASSERT_EQ(r.a, oracle::form_minimum_brute(ph.get_si(), bh.get_si(), c.get_si()))
				    << "d = " << d.value() << " p = " << p << " h = " << h;
				ASSERT_EQ(r.b * r.b - 4 * r.a * r.c, WideInt(d.value()));
				ASSERT_TRUE(abs(r.b) <= r.a && r.a <= r.c);
				// the basis change is unimodular and maps the input form to the output
				ASSERT_EQ(r.v1x * r.v2y - r.v1y * r.v2x, 1);
				ASSERT_EQ(ph * r.v1x * r.v1x + bh * r.v1x * r.v1y + c * r.v1y * r.v1y, r.a);
			}
		}
}

TEST(Generator, Examples)
{
	// d = -4, p = 5: a generator of norm 5 inside the prime (5, 4)
	PrimeCtx const c5(5);
	IdealRep const P5 = prime_above(FundamentalDiscriminant(-4), c5);
	QuadInt const g5 = generator_of_ideal_power(P5, 1, c5);
	EXPECT_EQ(g5.norm(), 5);
	EXPECT_TRUE(P5.contains(g5));
	EXPECT_FALSE(conjugate_ideal(P5).contains(g5));

	// d = -23, p = 3, h = 3: the norm equation x^2 + 23 y^2 = 108 has the
	// solutions (+-4, +-2), i.e. +-2 +- sqrt(-23); the generator is the one in P^3
	PrimeCtx const c3(3);
	IdealRep const P3 = prime_above(FundamentalDiscriminant(-23), c3);
	QuadInt const g3 = generator_of_ideal_power(P3, 3, c3);
	EXPECT_EQ(g3.norm(), 27);
	std::vector<QuadInt> solutions;
	for (long x = -12; x <= 12; ++x)
		for (long y = -3; y <= 3; ++y)
			if (x * x + 23 * y * y == 108)
				solutions.emplace_back(x, y, -23);
	EXPECT_EQ(solutions.size(), 4u);
	EXPECT_NE(std::find(solutions.begin(), solutions.end(), g3), solutions.end());
	IdealRep P3cubed{27, hensel_sqrt(std::int64_t{-23}, to_residue(P3.b, 3), c3, WideInt(27)), -23};
	if ((P3cubed.b + 23) % 2 != 0)
		P3cubed.b += 27;
	EXPECT_TRUE(P3cubed.contains(g3));
	EXPECT_FALSE(conjugate_ideal(P3cubed).contains(g3));

	EXPECT_EQ(generator_of_ideal_power(P3, 0, c3), QuadInt::one(-23));
	EXPECT_THROW(generator_of_ideal_power(P3, 1, c3), NotPrincipal);
}

TEST(Generator, NormAndMembershipOverTableRange)
{
	for (std::uint64_t p : odd_primes_below(100))
		for (auto const& d : enumerate_fundamental(200)) {
			if (kronecker(d.value(), static_cast<std::int64_t>(p)) != 1)
				continue;
			PrimeCtx const ctx(p);
			std::uint64_t const h = class_number(d);
			IdealRep const P = prime_above(d, ctx);
			QuadInt const alpha = generator_of_ideal_power(P, h, ctx);
			ASSERT_EQ(alpha.norm(), wide_pow(p, h)) << d.value() << " " << p;
			ResiduePair const r = residue_pair(alpha, ctx);
			ASSERT_NE(r.plus % p == 0, r.minus % p == 0) << d.value() << " " << p;
			QuadInt const beta = generator_of_ideal_power(conjugate_ideal(P), h, ctx);
			ASSERT_EQ(beta.norm(), wide_pow(p, h));
			auto const units = unit_group(d);
			ASSERT_TRUE(std::any_of(units.begin(), units.end(), [&](QuadInt const& u) { return alpha.conjugate() * u == beta; }));
		}
}

TEST(ResiduePair, Examples)
{
	PrimeCtx const ctx(5);
	residue_t const r = sqrt_d_mod_p2(-4, ctx);
	EXPECT_EQ((r * r + 4) % 25, 0u);
	EXPECT_EQ(r % 5, 1u); // reduction lies in [0, p/2]
	ResiduePair const one = residue_pair(QuadInt::one(-4), ctx);
	EXPECT_EQ(one.plus, 1u);
	EXPECT_EQ(one.minus, 1u);
	ResiduePair const s = residue_pair(QuadInt(0, 2, -4), ctx);
	EXPECT_EQ(s.plus, r);
	EXPECT_EQ(s.minus, 25 - r);
	QuadInt const g = generator_of_ideal_power(prime_above(FundamentalDiscriminant(-4), ctx), 1, ctx);
	ResiduePair const gr = residue_pair(g, ctx);
	EXPECT_EQ(gr.plus * gr.minus % 25, to_residue(g.norm(), 25));
	EXPECT_THROW(residue_pair(QuadInt::one(-4), PrimeCtx(3)), NotSplit);
}

TEST(ResiduePair, RingHomomorphism)
{
	std::mt19937_64 rng(17);
	std::uniform_int_distribution<long> pick(-100000, 100000);
	for (std::int64_t d : {-3, -4, -7, -8, -23, -191})
		for (std::uint64_t p : odd_primes_below(120)) {
			if (kronecker(d, static_cast<std::int64_t>(p)) != 1)
				continue;
			PrimeCtx const ctx(p);
			residue_t const root = sqrt_d_mod_p2(d, ctx);
			std::uint64_t const m = ctx.p2();
			for (int i = 0; i < 30; ++i) {
				long const y1 = pick(rng), y2 = pick(rng);
				long x1 = pick(rng), x2 = pick(rng);
				if (((x1 - y1 * d) & 1) != 0)
					++x1;
				if (((x2 - y2 * d) & 1) != 0)
					++x2;
				QuadInt const u(x1, y1, d), v(x2, y2, d);
				ResiduePair const ru = residue_pair(u, root, ctx), rv = residue_pair(v, root, ctx);
				ResiduePair const prod = residue_pair(u * v, root, ctx), sum = residue_pair(u + v, root, ctx);
				ASSERT_EQ(prod.plus, detail::mulmod(ru.plus, rv.plus, m));
				ASSERT_EQ(prod.minus, detail::mulmod(ru.minus, rv.minus, m));
				ASSERT_EQ(sum.plus, detail::addmod(ru.plus, rv.plus, m));
				ASSERT_EQ(sum.minus, detail::addmod(ru.minus, rv.minus, m));
				ASSERT_EQ(detail::mulmod(ru.plus, ru.minus, m), to_residue(u.norm(), m));
			}
		}
}
