#ifndef VRPRIMES_STABLEDIM_HPP
#define VRPRIMES_STABLEDIM_HPP

// Poincare series of the stable completed cohomology, the rank and dimension
// formulas that accompany them, and a small bigraded spectral-sequence engine
// for checking the degeneration pattern
//
//   E_2 = Q[xh_2, xh_6, xh_10, ...] (x) Lambda[x_3, x_5, x_7, ...],
//   d_{4n-1}(xh_{4n-2}) = x_{4n-1},   E_inf = Lambda[x_5, x_9, x_13, ...].
//
// The series for a field with r1 real and r2 complex places,
//   prod_k (1 - q^{4k-2})^{-r1} prod_k (1 - q^{2k})^{-r2},
// is conditional: it assumes the odd rational K-groups of the completion
// vanish, so reports that carry it are flagged `conditional`.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <gmpxx.h>
#include <nlohmann/json.hpp>

#include "vrprimes/arith.hpp"

namespace vrprimes {

/// Integer power series truncated at a fixed maximal degree.
class TruncSeries {
public:
	explicit TruncSeries(std::size_t max_degree)
	    : coeffs_(max_degree + 1, 0)
	{
	}

	TruncSeries(std::size_t max_degree, std::vector<std::int64_t> coeffs)
	    : coeffs_(std::move(coeffs))
	{
		coeffs_.resize(max_degree + 1, 0);
	}

	static TruncSeries one(std::size_t max_degree)
	{
		TruncSeries s(max_degree);
		s.coeffs_[0] = 1;
		return s;
	}

	std::size_t max_degree() const noexcept { return coeffs_.size() - 1; }
	std::int64_t operator[](std::size_t k) const { return k < coeffs_.size() ? coeffs_[k] : 0; }
	std::vector<std::int64_t> const& coeffs() const noexcept { return coeffs_; }

	friend TruncSeries operator+(TruncSeries const& u, TruncSeries const& v)
	{
		TruncSeries out(std::min(u.max_degree(), v.max_degree()));
		for (std::size_t k = 0; k <= out.max_degree(); ++k)
			out.coeffs_[k] = checked_add(u[k], v[k]);
		return out;
	}

	friend TruncSeries operator*(TruncSeries const& u, TruncSeries const& v)
	{
		TruncSeries out(std::min(u.max_degree(), v.max_degree()));
		for (std::size_t i = 0; i <= out.max_degree(); ++i) {
			if (u[i] == 0)
				continue;
			for (std::size_t j = 0; i + j <= out.max_degree(); ++j)
				out.coeffs_[i + j] = checked_add(out.coeffs_[i + j], checked_mul(u[i], v[j]));
		}
		return out;
	}

	/// Multiplicative inverse; the constant term must be +1 or -1.
	TruncSeries inverse() const
	{
		std::int64_t const c0 = coeffs_[0];
		if (c0 != 1 && c0 != -1)
			throw std::domain_error("TruncSeries::inverse: constant term must be a unit");
		TruncSeries out(max_degree());
		out.coeffs_[0] = c0;
		for (std::size_t k = 1; k <= max_degree(); ++k) {
			std::int64_t acc = 0;
			for (std::size_t i = 1; i <= k; ++i)
				acc = checked_add(acc, checked_mul(coeffs_[i], out.coeffs_[k - i]));
			out.coeffs_[k] = checked_mul(-acc, c0);
		}
		return out;
	}

	/// f(q) -> f(-q).
	TruncSeries alternate() const
	{
		TruncSeries out = *this;
		for (std::size_t k = 1; k < out.coeffs_.size(); k += 2)
			out.coeffs_[k] = -out.coeffs_[k];
		return out;
	}

	/// In-place multiplication by (1 + s q^deg).
	void mul_binomial(std::size_t deg, std::int64_t s)
	{
		if (deg == 0)
			throw std::invalid_argument("TruncSeries: factor degree must be positive");
		for (std::size_t k = max_degree(); k >= deg; --k)
			coeffs_[k] = checked_add(coeffs_[k], checked_mul(s, coeffs_[k - deg]));
	}

	/// In-place multiplication by 1 / (1 - s q^deg), s = +1 or -1.
	void div_binomial(std::size_t deg, std::int64_t s)
	{
		if (deg == 0)
			throw std::invalid_argument("TruncSeries: factor degree must be positive");
		for (std::size_t k = deg; k <= max_degree(); ++k)
			coeffs_[k] = checked_add(coeffs_[k], checked_mul(s, coeffs_[k - deg]));
	}

	friend bool operator==(TruncSeries const&, TruncSeries const&) = default;

private:
	static std::int64_t checked_add(std::int64_t a, std::int64_t b)
	{
		std::int64_t r;
		if (__builtin_add_overflow(a, b, &r))
			throw std::overflow_error("TruncSeries: coefficient overflow");
		return r;
	}

	static std::int64_t checked_mul(std::int64_t a, std::int64_t b)
	{
		std::int64_t r;
		if (__builtin_mul_overflow(a, b, &r))
			throw std::overflow_error("TruncSeries: coefficient overflow");
		return r;
	}

	std::vector<std::int64_t> coeffs_;
};

enum class GeneratorKind { Exterior, Polynomial };

struct Generator {
	unsigned degree = 1;
	unsigned multiplicity = 1;
	GeneratorKind kind = GeneratorKind::Polynomial;
};

using GradedGenerators = std::vector<Generator>;

/// Poincare series of the free graded-commutative algebra on `gens`, to degree D.
inline TruncSeries series_from_generators(GradedGenerators const& gens, std::size_t max_degree)
{
	TruncSeries s = TruncSeries::one(max_degree);
	for (auto const& g : gens) {
		if (g.degree == 0)
			throw std::invalid_argument("series_from_generators: generator degree must be positive");
		if (g.degree > max_degree)
			continue;
		for (unsigned m = 0; m < g.multiplicity; ++m) {
			if (g.kind == GeneratorKind::Exterior)
				s.mul_binomial(g.degree, 1);
			else
				s.div_binomial(g.degree, 1);
		}
	}
	return s;
}

/// Generators in degrees start, start + step, ... up to max_degree.
inline GradedGenerators generator_progression(unsigned start, unsigned step, std::size_t max_degree, GeneratorKind kind, unsigned multiplicity = 1)
{
	GradedGenerators out;
	if (multiplicity == 0)
		return out;
	for (std::size_t deg = start; deg <= max_degree; deg += step)
		out.push_back(Generator{static_cast<unsigned>(deg), multiplicity, kind});
	return out;
}

/// prod_k (1 - q^{4k-2})^{-r1} prod_k (1 - q^{2k})^{-r2}.
inline TruncSeries general_field_series(unsigned r1, unsigned r2, std::size_t max_degree)
{
	GradedGenerators gens = generator_progression(2, 4, max_degree, GeneratorKind::Polynomial, r1);
	GradedGenerators const complex_part = generator_progression(2, 2, max_degree, GeneratorKind::Polynomial, r2);
	gens.insert(gens.end(), complex_part.begin(), complex_part.end());
	return series_from_generators(gens, max_degree);
}

/// dim K~_{2n-2}(O) (x) Q - dim K~_{2n-1}(O) (x) Q for a field with signature (r1, r2).
inline std::int64_t rank_difference(unsigned n, unsigned r1, unsigned r2)
{
	if (n == 0)
		throw std::invalid_argument("rank_difference: n must be positive");
	if (n == 1)
		return static_cast<std::int64_t>(r2) + 1;
	if (n % 2 == 0)
		return static_cast<std::int64_t>(r1) + r2;
	return r2;
}

inline WideInt binomial(std::uint64_t n, std::uint64_t k)
{
	WideInt r;
	mpz_bin_uiui(r.get_mpz_t(), n, k);
	return r;
}

struct H2Dimension {
	WideInt value;
	bool outside_stable_range = false; // N < 3
};

/// dim H^2(Gamma(p), F_p) = C(N^2 - 1, 2) + 1 for SL_N over Z.
inline H2Dimension unstable_h2_dim(std::uint64_t n)
{
	return H2Dimension{binomial(n * n - 1, 2) + 1, n < 3};
}

struct HkAsymptotic {
	std::uint64_t n = 0;
	std::uint64_t k = 0;
	std::uint64_t field_degree = 1;
	std::optional<WideInt> exterior_dim; // C(N^2 - 1, k); degree-one fields only
	mpq_class leading;                   // N^{2kd} / k!
	mpq_class correction;                // -C(k+1, 2) N^{2(k-1)} / k!; degree-one fields only
	std::optional<mpq_class> residual;   // exterior_dim - leading - correction
};

inline HkAsymptotic unstable_hk_asymptotic(std::uint64_t n, std::uint64_t k, std::uint64_t field_degree = 1)
{
	if (k == 0)
		throw std::invalid_argument("unstable_hk_asymptotic: k must be positive");
	if (field_degree == 0)
		throw std::invalid_argument("unstable_hk_asymptotic: field degree must be positive");
	HkAsymptotic out;
	out.n = n;
	out.k = k;
	out.field_degree = field_degree;
	WideInt kfact;
	mpz_fac_ui(kfact.get_mpz_t(), k);
	out.leading = mpq_class(wide_pow(n, 2 * k * field_degree), kfact);
	out.leading.canonicalize();
	if (field_degree == 1) {
		out.exterior_dim = binomial(n * n - 1, k);
		out.correction = mpq_class(-binomial(k + 1, 2) * wide_pow(n, 2 * (k - 1)), kfact);
		out.correction.canonicalize();
		out.residual = mpq_class(*out.exterior_dim) - out.leading - out.correction;
	}
	return out;
}

// ---------------------------------------------------------------------------
// Bigraded spectral sequence of the Koszul-type complex above.

struct HSReport {
	std::size_t max_degree = 0;
	std::vector<std::int64_t> e2_dims;       // by total degree
	std::vector<std::int64_t> e_inf_dims;    // by total degree
	std::vector<std::int64_t> expected_dims; // coefficients of prod (1 + q^{4k+1})
	std::vector<unsigned> nonzero_pages;     // r with d_r != 0
	unsigned last_page = 0;
	bool matches = false;
};

namespace detail {

// Generators of E_2: index 0.. are polynomial xh_{4n-2} (rows), then exterior
// x_{2k+1}, k >= 1 (columns).
struct BigradedAlgebra {
	std::vector<unsigned> poly_degrees;
	std::vector<unsigned> ext_degrees;

	struct Monomial {
		std::vector<unsigned> poly_exp;
		std::vector<unsigned char> ext; // 0/1 per exterior generator
		unsigned column = 0;           // exterior degree
		unsigned row = 0;              // polynomial degree
		unsigned total() const { return column + row; }
		bool operator<(Monomial const& o) const
		{
			return std::tie(poly_exp, ext) < std::tie(o.poly_exp, o.ext);
		}
		bool operator==(Monomial const& o) const { return poly_exp == o.poly_exp && ext == o.ext; }
	};

	std::size_t ext_index(unsigned degree) const
	{
		auto it = std::find(ext_degrees.begin(), ext_degrees.end(), degree);
		return it == ext_degrees.end() ? ext_degrees.size() : static_cast<std::size_t>(it - ext_degrees.begin());
	}

	std::vector<Monomial> monomials(unsigned max_total) const
	{
		std::vector<Monomial> out;
		Monomial m;
		m.poly_exp.assign(poly_degrees.size(), 0);
		m.ext.assign(ext_degrees.size(), 0);
		enumerate_poly(0, m, max_total, out);
		return out;
	}

	void enumerate_poly(std::size_t i, Monomial& m, unsigned max_total, std::vector<Monomial>& out) const
	{
		if (i == poly_degrees.size()) {
			enumerate_ext(0, m, max_total, out);
			return;
		}
		unsigned const saved = m.row;
		for (unsigned e = 0; m.row <= max_total; ++e) {
			m.poly_exp[i] = e;
			enumerate_poly(i + 1, m, max_total, out);
			m.row += poly_degrees[i];
		}
		m.poly_exp[i] = 0;
		m.row = saved;
	}

	void enumerate_ext(std::size_t i, Monomial& m, unsigned max_total, std::vector<Monomial>& out) const
	{
		if (m.total() > max_total)
			return;
		if (i == ext_degrees.size()) {
			out.push_back(m);
			return;
		}
		enumerate_ext(i + 1, m, max_total, out);
		m.ext[i] = 1;
		m.column += ext_degrees[i];
		enumerate_ext(i + 1, m, max_total, out);
		m.column -= ext_degrees[i];
		m.ext[i] = 0;
	}

	/// Component of d with bidegree shift (r, 1 - r): the sum over generators
	/// xh_{r-1} of the derivation xh_{r-1} -> x_r.
	std::vector<std::pair<Monomial, std::int64_t>> differential(Monomial const& m, unsigned r) const
	{
		std::vector<std::pair<Monomial, std::int64_t>> out;
		for (std::size_t i = 0; i < poly_degrees.size(); ++i) {
			if (poly_degrees[i] + 1 != r || m.poly_exp[i] == 0)
				continue;
			std::size_t const j = ext_index(r);
			if (j == ext_degrees.size() || m.ext[j])
				continue;
			Monomial t = m;
			std::int64_t coeff = m.poly_exp[i];
			t.poly_exp[i] -= 1;
			t.row -= poly_degrees[i];
			// x_r moves past the exterior generators of lower index
			for (std::size_t l = 0; l < j; ++l)
				if (m.ext[l])
					coeff = -coeff;
			t.ext[j] = 1;
			t.column += r;
			out.emplace_back(std::move(t), coeff);
		}
		return out;
	}
};

// Rank of a small rational matrix.
inline std::size_t rational_rank(std::vector<std::vector<mpq_class>> rows)
{
	std::size_t rank = 0;
	std::size_t const ncols = rows.empty() ? 0 : rows[0].size();
	for (std::size_t c = 0; c < ncols && rank < rows.size(); ++c) {
		std::size_t piv = rank;
		while (piv < rows.size() && rows[piv][c] == 0)
			++piv;
		if (piv == rows.size())
			continue;
		std::swap(rows[piv], rows[rank]);
		for (std::size_t i = rank + 1; i < rows.size(); ++i) {
			if (rows[i][c] == 0)
				continue;
			mpq_class const f = rows[i][c] / rows[rank][c];
			for (std::size_t cc = c; cc < ncols; ++cc)
				rows[i][cc] -= f * rows[rank][cc];
		}
		++rank;
	}
	return rank;
}

} // namespace detail

/// Coefficients of prod_{k>=1} (1 + q^{4k+1}), the expected E_inf series.
inline TruncSeries expected_limit_series(std::size_t max_degree)
{
	return series_from_generators(generator_progression(5, 4, max_degree, GeneratorKind::Exterior), max_degree);
}

/// Run the spectral sequence to E_inf in total degrees <= D and compare with
/// Lambda[x_5, x_9, ...]. Each page is computed by exact rational rank counts
/// and its surviving monomials become the basis of the next page.
inline HSReport hs_degeneration_check(std::size_t max_degree)
{
	if (max_degree > 40)
		throw std::invalid_argument("hs_degeneration_check: degree bound above 40 is out of range");
	using detail::BigradedAlgebra;
	using Monomial = BigradedAlgebra::Monomial;

	// one extra total degree so that d out of degree D is fully visible
	unsigned const top = static_cast<unsigned>(max_degree) + 1;
	BigradedAlgebra alg;
	for (unsigned deg = 2; deg <= top; deg += 4)
		alg.poly_degrees.push_back(deg);
	for (unsigned deg = 3; deg <= top; deg += 2)
		alg.ext_degrees.push_back(deg);

	std::vector<Monomial> basis = alg.monomials(top);
	std::sort(basis.begin(), basis.end());

	HSReport rep;
	rep.max_degree = max_degree;
	auto dims_by_total = [&](std::vector<Monomial> const& b) {
		std::vector<std::int64_t> dims(max_degree + 1, 0);
		for (auto const& m : b)
			if (m.total() <= max_degree)
				++dims[m.total()];
		return dims;
	};
	rep.e2_dims = dims_by_total(basis);

	unsigned const last_page = top + 1;
	for (unsigned r = 2; r <= last_page; ++r) {
		using Bideg = std::pair<unsigned, unsigned>;
		std::map<Monomial, std::vector<std::pair<Monomial, std::int64_t>>> image;
		bool any = false;
		for (auto const& m : basis) {
			auto terms = alg.differential(m, r);
			std::vector<std::pair<Monomial, std::int64_t>> kept;
			for (auto& t : terms) {
				if (t.first.total() > top)
					continue; // beyond truncation
				if (!std::binary_search(basis.begin(), basis.end(), t.first))
					throw InternalInconsistency("hs_degeneration_check: differential leaves the page basis");
				kept.push_back(std::move(t));
			}
			if (!kept.empty())
				any = true;
			image.emplace(m, std::move(kept));
		}
		if (!any)
			continue;
		if (r == last_page)
			throw NonConvergence("hs_degeneration_check: nonzero differential on page " + std::to_string(r));
		rep.nonzero_pages.push_back(r);

		// exact homology dimension per bidegree
		std::map<Bideg, std::vector<Monomial>> by_bideg;
		for (auto const& m : basis)
			by_bideg[{m.column, m.row}].push_back(m);
		auto rank_out = [&](Bideg const& src) -> std::size_t {
			auto it = by_bideg.find(src);
			if (it == by_bideg.end() || src.second + 1 < r)
				return 0;
			auto tgt_it = by_bideg.find({src.first + r, src.second + 1 - r});
			if (tgt_it == by_bideg.end())
				return 0;
			auto const& tgt = tgt_it->second;
			std::vector<std::vector<mpq_class>> rows;
			for (auto const& m : it->second) {
				std::vector<mpq_class> row(tgt.size(), 0);
				for (auto const& [t, c] : image[m]) {
					auto pos = std::lower_bound(tgt.begin(), tgt.end(), t);
					row[static_cast<std::size_t>(pos - tgt.begin())] += c;
				}
				rows.push_back(std::move(row));
			}
			return detail::rational_rank(std::move(rows));
		};
		std::map<Bideg, std::int64_t> next_dim;
		for (auto const& [bd, ms] : by_bideg) {
			std::int64_t const out_rank = static_cast<std::int64_t>(rank_out(bd));
			std::int64_t in_rank = 0;
			if (bd.first >= r)
				in_rank = static_cast<std::int64_t>(rank_out({bd.first - r, bd.second + r - 1}));
			next_dim[bd] = static_cast<std::int64_t>(ms.size()) - out_rank - in_rank;
		}

		// survivors: cycles that are not hit
		std::vector<Monomial> hit;
		for (auto const& [m, terms] : image)
			for (auto const& t : terms)
				hit.push_back(t.first);
		std::sort(hit.begin(), hit.end());
		std::vector<Monomial> next;
		for (auto const& m : basis) {
			if (!image[m].empty() || std::binary_search(hit.begin(), hit.end(), m))
				continue;
			next.push_back(m);
		}
		std::map<Bideg, std::int64_t> survivor_count;
		for (auto const& m : next)
			++survivor_count[{m.column, m.row}];
		for (auto const& [bd, dim] : next_dim) {
			if (bd.first + bd.second > max_degree)
				continue;
			auto it = survivor_count.find(bd);
			std::int64_t const have = it == survivor_count.end() ? 0 : it->second;
			if (have != dim)
				throw InternalInconsistency("hs_degeneration_check: page " + std::to_string(r + 1) +
				                            " has no monomial basis at bidegree (" + std::to_string(bd.first) + ", " +
				                            std::to_string(bd.second) + ")");
		}
		basis = std::move(next);
	}
	rep.last_page = last_page;
	rep.e_inf_dims = dims_by_total(basis);
	rep.expected_dims = expected_limit_series(max_degree).coeffs();
	rep.matches = rep.e_inf_dims == rep.expected_dims;
	return rep;
}

/// Exterior generators x_3, x_5, x_7, ... of the E_2 base, to degree D.
inline GradedGenerators default_koszul_base(std::size_t max_degree)
{
	return generator_progression(3, 2, max_degree, GeneratorKind::Exterior);
}

/// Signed series identity behind the degeneration: with q -> -q,
///   series(Q[xh_2, xh_6, ...] (x) Lambda[base])
///     = series(Lambda[x_5, x_9, ...]) * prod_n (1 + (-q)^{4n-1}) / (1 - (-q)^{4n-2}).
/// `base` defaults to x_3, x_5, x_7, ...; pass a perturbed list for a negative control.
inline bool koszul_series_identity(std::size_t max_degree, std::optional<GradedGenerators> base = std::nullopt)
{
	if (max_degree > 64)
		throw std::invalid_argument("koszul_series_identity: degree bound above 64 is out of range");
	GradedGenerators lhs_gens = base ? *base : default_koszul_base(max_degree);
	GradedGenerators const fiber = generator_progression(2, 4, max_degree, GeneratorKind::Polynomial);
	lhs_gens.insert(lhs_gens.end(), fiber.begin(), fiber.end());
	TruncSeries const lhs = series_from_generators(lhs_gens, max_degree).alternate();

	TruncSeries rhs = expected_limit_series(max_degree).alternate();
	for (std::size_t n = 1; 4 * n - 2 <= max_degree; ++n) {
		std::size_t const odd = 4 * n - 1;
		std::size_t const even = 4 * n - 2;
		if (odd <= max_degree)
			rhs.mul_binomial(odd, -1); // 1 + (-q)^{odd}
		rhs.div_binomial(even, 1);     // 1 / (1 - (-q)^{even})
	}
	return lhs == rhs;
}

inline nlohmann::json to_json(HSReport const& r)
{
	return nlohmann::json{{"max_degree", r.max_degree},
	                      {"e2_dims", r.e2_dims},
	                      {"e_infinity_dims", r.e_inf_dims},
	                      {"expected_dims", r.expected_dims},
	                      {"nonzero_pages", r.nonzero_pages},
	                      {"matches", r.matches},
	                      {"conditional", false}};
}

} // namespace vrprimes

#endif // VRPRIMES_STABLEDIM_HPP
