#ifndef VRPRIMES_TOOLS_CLI_HPP
#define VRPRIMES_TOOLS_CLI_HPP

// Command-line front end. `run` is separate from main() so tests can drive it
// with in-memory streams.
//
// Exit codes: 0 success, 1 computational error or failed check, 2 usage error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include <nlohmann/json.hpp>

#include "vrprimes/arith.hpp"
#include "vrprimes/bernoulli.hpp"
#include "vrprimes/quadfield.hpp"
#include "vrprimes/stabledim.hpp"
#include "vrprimes/survey.hpp"
#include "vrprimes/veryregular.hpp"

namespace vrprimes::cli {

enum class Output { Text, Json };

inline std::int64_t canonical_discriminant(std::int64_t d) { return d > 0 ? -d : d; }

inline std::string join(std::vector<std::uint64_t> const& v, char const* sep)
{
	std::string out;
	for (std::size_t i = 0; i < v.size(); ++i) {
		if (i)
			out += sep;
		out += std::to_string(v[i]);
	}
	return out;
}

inline std::string series_text(TruncSeries const& s)
{
	std::string out;
	for (std::size_t k = 0; k <= s.max_degree(); ++k) {
		if (k)
			out += ' ';
		out += std::to_string(s[k]);
	}
	return out;
}

inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err)
{
	CLI::App app{"Very regular primes of imaginary quadratic fields and stable cohomology series", "vrprimes"};
	app.require_subcommand(1);

	auto add_output = [](CLI::App* sub, std::string& target) {
		sub->add_option("--output", target, "Output format")->check(CLI::IsMember({"text", "json"}));
	};

	// regular
	std::uint64_t reg_p = 0;
	std::string reg_out = "text";
	auto* reg = app.add_subcommand("regular", "Kummer regularity of p with zeta witnesses");
	reg->add_option("p", reg_p, "Odd prime")->required();
	add_output(reg, reg_out);

	// very-regular
	std::int64_t vr_d = 0;
	std::uint64_t vr_p = 0;
	std::string vr_out = "json";
	auto* vr = app.add_subcommand("very-regular", "Verdict for a discriminant d and prime p");
	vr->add_option("d", vr_d, "Fundamental discriminant (-8 or 8)")->required();
	vr->add_option("p", vr_p, "Odd prime")->required();
	add_output(vr, vr_out);

	// list
	std::uint64_t list_p = 0, list_limit = 0;
	std::string list_out = "text";
	auto* lst = app.add_subcommand("list", "All |d| <= limit for which p is very regular");
	lst->add_option("--p", list_p, "Odd prime")->required();
	lst->add_option("--limit", list_limit, "Bound on |d|")->required();
	add_output(lst, list_out);

	// scan
	ScanOptions scan_opt;
	std::string scan_ckpt, scan_path, scan_format = "csv", scan_out = "text";
	auto* scn = app.add_subcommand("scan", "Survey over fundamental discriminants with density tallies");
	scn->add_option("--p", scan_opt.p, "Odd prime")->required();
	scn->add_option("--dmax", scan_opt.dmax, "Bound on |d| (exclusive unless --inclusive)")->required();
	scn->add_option("--jobs", scan_opt.jobs, "Worker threads")->check(CLI::PositiveNumber);
	scn->add_option("--checkpoint", scan_ckpt, "Checkpoint file (resumed when present)");
	scn->add_option("--out", scan_path, "Record output file");
	scn->add_option("--format", scan_format, "Record format")->check(CLI::IsMember({"csv", "jsonl"}));
	scn->add_flag("--inclusive", scan_opt.inclusive, "Count |d| = dmax");
	add_output(scn, scan_out);

	// table
	std::uint64_t table_pmax = 97;
	std::string table_out = "text";
	auto* tbl = app.add_subcommand("table", "Verification table for the ten smallest fields");
	tbl->add_option("--pmax", table_pmax, "Largest prime");
	add_output(tbl, table_out);

	// density
	std::uint64_t dens_p = 0;
	std::string dens_out = "text";
	auto* dns = app.add_subcommand("density", "Predicted density prod (1 - p^-n)");
	dns->add_option("--p", dens_p, "Prime")->required();
	add_output(dns, dens_out);

	// series
	unsigned ser_r1 = 1, ser_r2 = 0;
	std::size_t ser_deg = 18;
	std::string ser_out = "text";
	auto* ser = app.add_subcommand("series", "Poincare series for signature (r1, r2)");
	ser->add_option("--r1", ser_r1, "Real places")->required();
	ser->add_option("--r2", ser_r2, "Complex places")->required();
	ser->add_option("--maxdeg", ser_deg, "Truncation degree")->required();
	add_output(ser, ser_out);

	// dims
	std::uint64_t dims_n = 0, dims_k = 2, dims_field = 1;
	std::string dims_out = "text";
	auto* dms = app.add_subcommand("dims", "Unstable cohomology dimension formulas");
	dms->add_option("--N", dims_n, "Matrix size")->required();
	dms->add_option("--k", dims_k, "Cohomological degree")->required()->check(CLI::PositiveNumber);
	dms->add_option("--field-degree", dims_field, "Degree of the number field")->check(CLI::PositiveNumber);
	add_output(dms, dims_out);

	// hs-check
	std::size_t hs_deg = 20;
	std::string hs_out = "text";
	auto* hsc = app.add_subcommand("hs-check", "Spectral sequence degeneration check");
	hsc->add_option("--maxdeg", hs_deg, "Total degree bound (<= 40)")->required();
	add_output(hsc, hs_out);

	// koszul-check
	std::size_t ks_deg = 64;
	std::string ks_out = "text";
	auto* ksc = app.add_subcommand("koszul-check", "Signed Koszul series identity");
	ksc->add_option("--maxdeg", ks_deg, "Degree bound (<= 64)")->required();
	add_output(ksc, ks_out);

	std::vector<std::string> reversed(args.rbegin(), args.rend());
	try {
		app.parse(reversed);
	} catch (CLI::CallForHelp const&) {
		out << app.help();
		return 0;
	} catch (CLI::ParseError const& e) {
		err << "error: " << e.what() << "\n" << app.help();
		return 2;
	}

	auto const json_out = [&](std::string const& fmt) { return fmt == "json"; };

	try {
		if (*reg) {
			WitnessResult const r = is_regular(reg_p);
			if (json_out(reg_out))
				out << nlohmann::json{{"p", reg_p}, {"regular", r.holds}, {"zeta_witnesses", r.witnesses}}.dump() << '\n';
			else if (r.holds)
				out << "regular\n";
			else {
				std::vector<std::uint64_t> w(r.witnesses.begin(), r.witnesses.end());
				out << "irregular: " << join(w, ",") << '\n';
			}
			return 0;
		}
		if (*vr) {
			FundamentalDiscriminant const d(canonical_discriminant(vr_d));
			VRReport const r = very_regular(d, PrimeCtx(vr_p));
			if (json_out(vr_out))
				out << nlohmann::json(r).dump() << '\n';
			else
				out << to_string(r.verdict) << (r.cell().empty() ? "" : " " + r.cell()) << '\n';
			return 0;
		}
		if (*lst) {
			auto const v = list_very_regular_discriminants(PrimeCtx(list_p), list_limit);
			if (json_out(list_out))
				out << nlohmann::json(v).dump() << '\n';
			else
				out << '[' << join(v, ", ") << "]\n";
			return 0;
		}
		if (*scn) {
			if (!scan_ckpt.empty())
				scan_opt.checkpoint = scan_ckpt;
			else if (char const* dir = std::getenv("VRPRIMES_CHECKPOINT_DIR"); dir && *dir)
				scan_opt.checkpoint = std::filesystem::path(dir) /
				                      ("scan-p" + std::to_string(scan_opt.p) + "-d" + std::to_string(scan_opt.dmax) + ".json");
			RecordFormat const fmt = scan_format == "jsonl" ? RecordFormat::JsonLines : RecordFormat::Csv;

			std::unique_ptr<std::ofstream> records;
			if (!scan_path.empty()) {
				std::optional<Checkpoint> prior;
				if (scan_opt.checkpoint && std::filesystem::exists(*scan_opt.checkpoint))
					prior = load_checkpoint(*scan_opt.checkpoint);
				bool const append = prior && std::filesystem::exists(scan_path);
				if (append)
					trim_output_for_resume(scan_path, prior->last_d, fmt);
				records = std::make_unique<std::ofstream>(scan_path, append ? std::ios::app : std::ios::trunc);
				if (!*records)
					throw IoError("cannot open output " + scan_path);
				if (!append && fmt == RecordFormat::Csv)
					*records << csv_header << '\n';
			}
			ScanResult const res = scan(scan_opt, [&](SurveyRecord const& r) {
				if (records)
					*records << format_record(r, fmt) << '\n';
			});
			if (records) {
				records->flush();
				if (!*records)
					throw IoError("write failed on " + scan_path);
			}
			if (json_out(scan_out))
				out << nlohmann::json{{"p", scan_opt.p},
				                      {"dmax", scan_opt.dmax},
				                      {"inclusive", scan_opt.inclusive},
				                      {"split_count", res.tallies.split_count},
				                      {"vr_count", res.tallies.vr_count},
				                      {"percentage", res.tallies.percentage()},
				                      {"resumed", res.resumed}}
				           .dump()
				    << '\n';
			else
				out << "split=" << res.tallies.split_count << " very_regular=" << res.tallies.vr_count
				    << " percentage=" << res.tallies.percentage_string() << "%\n";
			return 0;
		}
		if (*tbl) {
			VerificationTable const t = emit_table(table_pmax);
			if (json_out(table_out))
				out << to_json(t).dump(2) << '\n';
			else
				out << render_text(t);
			return 0;
		}
		if (*dns) {
			std::string const v = format_fixed(density_prediction(dens_p), 6);
			if (json_out(dens_out))
				out << nlohmann::json{{"p", dens_p}, {"density", std::stod(v)}}.dump() << '\n';
			else
				out << v << '\n';
			return 0;
		}
		if (*ser) {
			TruncSeries const s = general_field_series(ser_r1, ser_r2, ser_deg);
			if (json_out(ser_out))
				out << nlohmann::json{{"r1", ser_r1}, {"r2", ser_r2}, {"max_degree", ser_deg}, {"coefficients", s.coeffs()}, {"conditional", true}}.dump()
				    << '\n';
			else
				out << series_text(s) << '\n';
			return 0;
		}
		if (*dms) {
			HkAsymptotic const a = unstable_hk_asymptotic(dims_n, dims_k, dims_field);
			if (json_out(dims_out)) {
				nlohmann::json j{{"N", dims_n}, {"k", dims_k}, {"field_degree", dims_field}, {"leading", a.leading.get_str()}};
				if (a.exterior_dim) {
					j["exterior_dim"] = to_decimal(*a.exterior_dim);
					j["correction"] = a.correction.get_str();
					j["residual"] = a.residual->get_str();
				}
				if (dims_k == 2 && dims_field == 1) {
					H2Dimension const h2 = unstable_h2_dim(dims_n);
					j["h2_dim"] = to_decimal(h2.value);
					j["outside_stable_range"] = h2.outside_stable_range;
				}
				out << j.dump() << '\n';
			} else if (dims_k == 2 && dims_field == 1) {
				H2Dimension const h2 = unstable_h2_dim(dims_n);
				out << to_decimal(h2.value) << '\n';
				if (h2.outside_stable_range)
					err << "warning: N < 3 is outside the stable range\n";
			} else if (a.exterior_dim) {
				out << to_decimal(*a.exterior_dim) << '\n';
			} else {
				out << a.leading.get_str() << '\n';
			}
			return 0;
		}
		if (*hsc) {
			HSReport const r = hs_degeneration_check(hs_deg);
			if (json_out(hs_out)) {
				out << to_json(r).dump() << '\n';
			} else {
				std::vector<std::uint64_t> dims(r.e_inf_dims.begin(), r.e_inf_dims.end());
				out << "E_inf dims: " << join(dims, " ") << '\n' << "matches: " << (r.matches ? "true" : "false") << '\n';
			}
			return r.matches ? 0 : 1;
		}
		if (*ksc) {
			bool const ok = koszul_series_identity(ks_deg);
			if (json_out(ks_out))
				out << nlohmann::json{{"max_degree", ks_deg}, {"holds", ok}, {"conditional", false}}.dump() << '\n';
			else
				out << (ok ? "true" : "false") << '\n';
			return ok ? 0 : 1;
		}
	} catch (std::invalid_argument const& e) {
		err << "error: " << e.what() << '\n';
		return 2;
	} catch (std::exception const& e) {
		err << "error: " << e.what() << '\n';
		return 1;
	}
	return 2;
}

} // namespace vrprimes::cli

#endif // VRPRIMES_TOOLS_CLI_HPP
