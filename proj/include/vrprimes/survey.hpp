#ifndef VRPRIMES_SURVEY_HPP
#define VRPRIMES_SURVEY_HPP

// Batch scans of very-regular verdicts over ranges of discriminants, with
// checkpointing, record output (CSV or JSON lines), the Cohen-Lenstra style
// density prediction, and the small-field verification table.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "vrprimes/bernoulli.hpp"
#include "vrprimes/quadfield.hpp"
#include "vrprimes/veryregular.hpp"

namespace vrprimes {

struct SurveyRecord {
	std::int64_t d = 0;
	std::uint64_t h = 0;
	VRReport report;

	std::string witness_summary() const { return report.cell(); }
};

struct Tallies {
	std::uint64_t split_count = 0;
	std::uint64_t vr_count = 0;

	/// 100 * vr / split in tenths of a percent, rounded half-up.
	std::uint64_t percentage_tenths() const
	{
		if (split_count == 0)
			return 0;
		return (2000 * vr_count + split_count) / (2 * split_count);
	}

	std::string percentage_string() const
	{
		std::uint64_t const t = percentage_tenths();
		return std::to_string(t / 10) + "." + std::to_string(t % 10);
	}

	double percentage() const { return static_cast<double>(percentage_tenths()) / 10.0; }

	friend bool operator==(Tallies const&, Tallies const&) = default;
};

// ---------------------------------------------------------------------------
// Checkpoints

struct Checkpoint {
	static constexpr int current_version = 1;

	int version = current_version;
	std::uint64_t p = 0;
	std::uint64_t last_d = 0; // last completed |d|
	Tallies tallies;
};

inline nlohmann::json to_json(Checkpoint const& c)
{
	return nlohmann::json{{"version", c.version},
	                      {"p", c.p},
	                      {"last_d", c.last_d},
	                      {"split_count", c.tallies.split_count},
	                      {"vr_count", c.tallies.vr_count}};
}

inline Checkpoint load_checkpoint(std::filesystem::path const& path)
{
	std::ifstream in(path);
	if (!in)
		throw IoError("cannot open checkpoint " + path.string());
	nlohmann::json j;
	try {
		in >> j;
	} catch (nlohmann::json::exception const& e) {
		throw IoError("malformed checkpoint " + path.string() + ": " + e.what());
	}
	Checkpoint c;
	c.version = j.value("version", 0);
	if (c.version != Checkpoint::current_version)
		throw CheckpointVersionMismatch("checkpoint " + path.string() + " has version " + std::to_string(c.version) +
		                                ", expected " + std::to_string(Checkpoint::current_version));
	try {
		c.p = j.at("p").get<std::uint64_t>();
		c.last_d = j.at("last_d").get<std::uint64_t>();
		c.tallies.split_count = j.at("split_count").get<std::uint64_t>();
		c.tallies.vr_count = j.at("vr_count").get<std::uint64_t>();
	} catch (nlohmann::json::exception const& e) {
		throw IoError("malformed checkpoint " + path.string() + ": " + e.what());
	}
	return c;
}

/// Write via a temporary file and rename, so readers never see a partial document.
inline void save_checkpoint(std::filesystem::path const& path, Checkpoint const& c)
{
	std::filesystem::path tmp = path;
	tmp += ".tmp";
	{
		std::ofstream out(tmp, std::ios::trunc);
		if (!out)
			throw IoError("cannot write checkpoint " + tmp.string());
		out << to_json(c).dump() << '\n';
		out.flush();
		if (!out)
			throw IoError("cannot write checkpoint " + tmp.string());
	}
	std::error_code ec;
	std::filesystem::rename(tmp, path, ec);
	if (ec)
		throw IoError("cannot rename checkpoint into " + path.string() + ": " + ec.message());
}

// ---------------------------------------------------------------------------
// Record output

enum class RecordFormat { Csv, JsonLines };

inline std::string join_witnesses(std::vector<int> const& w)
{
	std::string out;
	for (std::size_t i = 0; i < w.size(); ++i) {
		if (i)
			out += ';';
		out += std::to_string(w[i]);
	}
	return out;
}

inline constexpr char const* csv_header = "d,h,split,zeta_witnesses,l_witnesses,artin_ok,verdict";

inline std::string format_record(SurveyRecord const& r, RecordFormat fmt)
{
	if (fmt == RecordFormat::JsonLines) {
		nlohmann::json j = r.report;
		j["h"] = r.h;
		return j.dump();
	}
	std::string const artin = r.report.artin_ok.has_value() ? (*r.report.artin_ok ? "true" : "false") : "";
	return std::to_string(r.d) + "," + std::to_string(r.h) + "," + (r.report.split ? "true" : "false") + "," +
	       join_witnesses(r.report.zeta_witnesses) + "," + join_witnesses(r.report.l_witnesses) + "," + artin + "," +
	       to_string(r.report.verdict);
}

/// Drop records with |d| > last_d from an existing output file, so a resumed
/// scan can append without duplicating work flushed after the last checkpoint.
inline void trim_output_for_resume(std::filesystem::path const& path, std::uint64_t last_d, RecordFormat fmt)
{
	std::ifstream in(path);
	if (!in)
		return;
	std::vector<std::string> kept;
	std::string line;
	while (std::getline(in, line)) {
		if (line.empty())
			continue;
		if (fmt == RecordFormat::Csv && line.rfind("d,", 0) == 0) {
			kept.push_back(line);
			continue;
		}
		std::int64_t d = 0;
		if (fmt == RecordFormat::Csv)
			d = std::stoll(line.substr(0, line.find(',')));
		else
			d = nlohmann::json::parse(line).at("d").get<std::int64_t>();
		if (static_cast<std::uint64_t>(-d) <= last_d)
			kept.push_back(line);
	}
	in.close();
	std::ofstream out(path, std::ios::trunc);
	if (!out)
		throw IoError("cannot rewrite " + path.string());
	for (auto const& l : kept)
		out << l << '\n';
}

// ---------------------------------------------------------------------------
// Scanning

struct ScanOptions {
	std::uint64_t p = 3;
	std::uint64_t dmax = 1000;
	unsigned jobs = 1;
	/// Include |d| = dmax; the default counts |d| < dmax.
	bool inclusive = false;
	std::optional<std::filesystem::path> checkpoint;
	/// Stop after this many blocks in the current run (simulated interruption).
	std::optional<std::size_t> stop_after_blocks;
	std::uint64_t block_size = 1024;
};

struct ScanResult {
	Tallies tallies;
	std::uint64_t last_d = 0;
	bool completed = false;
	bool resumed = false;
};

/// Records for the split fundamental discriminants with lo <= |d| <= hi.
inline std::vector<SurveyRecord> scan_block(PrimeTables const& tables, std::uint64_t lo, std::uint64_t hi)
{
	std::vector<SurveyRecord> out;
	std::int64_t const p = static_cast<std::int64_t>(tables.ctx.p());
	for (std::uint64_t n = lo; n <= hi; ++n) {
		std::int64_t const d = -static_cast<std::int64_t>(n);
		if (!is_fundamental(d) || kronecker(d, p) != 1)
			continue;
		FundamentalDiscriminant const fd(d);
		std::uint64_t const h = class_number(fd);
		out.push_back(SurveyRecord{d, h, very_regular(fd, tables, h)});
	}
	return out;
}

/// Scan |d| in [3, dmax) (or [3, dmax] when inclusive) in blocks. Records reach
/// `sink` in ascending |d| whatever the parallelism; the checkpoint, when
/// configured, is rewritten after every block.
inline ScanResult scan(ScanOptions const& opt, std::function<void(SurveyRecord const&)> const& sink = {})
{
	PrimeCtx const ctx(opt.p);
	if (opt.dmax < 3)
		throw std::invalid_argument("scan: dmax must be at least 3");
	if (opt.jobs == 0 || opt.block_size == 0)
		throw std::invalid_argument("scan: jobs and block size must be positive");
	std::uint64_t const upper = opt.inclusive ? opt.dmax : opt.dmax - 1;

	ScanResult res;
	res.last_d = 2;
	if (opt.checkpoint && std::filesystem::exists(*opt.checkpoint)) {
		Checkpoint const c = load_checkpoint(*opt.checkpoint);
		if (c.p != opt.p)
			throw IoError("checkpoint " + opt.checkpoint->string() + " was written for p = " + std::to_string(c.p));
		res.last_d = c.last_d;
		res.tallies = c.tallies;
		res.resumed = true;
	}

	PrimeTables const tables(ctx);
	std::size_t blocks_done = 0;
	std::uint64_t next = res.last_d + 1;
	while (next <= upper) {
		if (opt.stop_after_blocks && blocks_done >= *opt.stop_after_blocks)
			return res;
		std::vector<std::pair<std::uint64_t, std::uint64_t>> wave;
		for (unsigned j = 0; j < opt.jobs && next <= upper; ++j) {
			std::uint64_t const hi = std::min(upper, next + opt.block_size - 1);
			wave.emplace_back(next, hi);
			next = hi + 1;
		}
		std::vector<std::future<std::vector<SurveyRecord>>> futures;
		if (opt.jobs > 1) {
			for (auto const& [lo, hi] : wave)
				futures.push_back(std::async(std::launch::async, [&tables, lo = lo, hi = hi] { return scan_block(tables, lo, hi); }));
		}
		for (std::size_t i = 0; i < wave.size(); ++i) {
			std::vector<SurveyRecord> const recs = opt.jobs > 1 ? futures[i].get() : scan_block(tables, wave[i].first, wave[i].second);
			for (auto const& r : recs) {
				++res.tallies.split_count;
				if (r.report.verdict == Verdict::VeryRegular)
					++res.tallies.vr_count;
				if (sink)
					sink(r);
			}
			res.last_d = wave[i].second;
			if (opt.checkpoint)
				save_checkpoint(*opt.checkpoint, Checkpoint{Checkpoint::current_version, opt.p, res.last_d, res.tallies});
			++blocks_done;
			// pending futures of this wave are joined by their destructors
			if (opt.stop_after_blocks && blocks_done >= *opt.stop_after_blocks && i + 1 < wave.size())
				return res;
		}
	}
	res.completed = true;
	return res;
}

/// prod_{n>=1} (1 - p^{-n}), stopping once factors are within 1e-12 of 1.
inline double density_prediction(std::uint64_t p)
{
	if (p < 2)
		throw std::invalid_argument("density_prediction: p must be at least 2");
	double prod = 1.0;
	double term = 1.0;
	for (;;) {
		term /= static_cast<double>(p);
		if (term < 1e-12)
			break;
		prod *= 1.0 - term;
	}
	return prod;
}

inline std::string format_fixed(double v, int decimals)
{
	std::ostringstream os;
	os << std::fixed << std::setprecision(decimals) << v;
	return os.str();
}

// ---------------------------------------------------------------------------
// Verification table

struct VerificationTable {
	std::vector<std::uint64_t> primes;
	std::vector<std::uint64_t> discriminants; // |d|
	std::vector<std::vector<std::string>> cells; // [prime][discriminant]

	friend bool operator==(VerificationTable const&, VerificationTable const&) = default;
};

inline std::vector<std::uint64_t> default_table_discriminants()
{
	return {3, 4, 7, 8, 11, 15, 19, 20, 23, 24};
}

inline VerificationTable emit_table(std::uint64_t pmax = 97, std::vector<std::uint64_t> discriminants = default_table_discriminants())
{
	VerificationTable t;
	t.discriminants = std::move(discriminants);
	for (std::uint64_t p = 3; p <= pmax; p += 2) {
		if (!is_prime(p))
			continue;
		PrimeTables const tables{PrimeCtx(p)};
		t.primes.push_back(p);
		std::vector<std::string> row;
		for (auto n : t.discriminants)
			row.push_back(very_regular(FundamentalDiscriminant(-static_cast<std::int64_t>(n)), tables).cell());
		t.cells.push_back(std::move(row));
	}
	return t;
}

namespace detail {

inline std::size_t display_width(std::string const& s)
{
	std::size_t w = 0;
	for (unsigned char c : s)
		if ((c & 0xC0) != 0x80)
			++w;
	return w;
}

inline std::string trim(std::string const& s)
{
	auto const b = s.find_first_not_of(' ');
	if (b == std::string::npos)
		return "";
	auto const e = s.find_last_not_of(' ');
	return s.substr(b, e - b + 1);
}

} // namespace detail

inline constexpr std::size_t table_cell_width = 6;

/// Aligned text: a header row of |d| values, then one row per prime. Columns
/// are separated by " | "; trailing blanks are stripped.
inline std::string render_text(VerificationTable const& t)
{
	auto pad = [](std::string s, std::size_t w) {
		std::size_t const dw = detail::display_width(s);
		if (dw < w)
			s.append(w - dw, ' ');
		return s;
	};
	auto finish = [](std::string line) {
		while (!line.empty() && line.back() == ' ')
			line.pop_back();
		return line + '\n';
	};
	std::string out;
	std::string header = pad("-d_F", 4);
	for (auto n : t.discriminants)
		header += " | " + pad(std::to_string(n), table_cell_width);
	out += finish(header);
	for (std::size_t i = 0; i < t.primes.size(); ++i) {
		std::string line = std::to_string(t.primes[i]);
		line = std::string(4 - std::min<std::size_t>(4, line.size()), ' ') + line;
		for (auto const& c : t.cells[i])
			line += " | " + pad(c, table_cell_width);
		out += finish(line);
	}
	return out;
}

/// Inverse of render_text.
inline VerificationTable parse_table_text(std::string const& text)
{
	VerificationTable t;
	std::istringstream in(text);
	std::string line;
	bool header = true;
	while (std::getline(in, line)) {
		if (detail::trim(line).empty())
			continue;
		std::vector<std::string> fields;
		std::size_t pos = 0;
		for (;;) {
			std::size_t const bar = line.find('|', pos);
			fields.push_back(detail::trim(line.substr(pos, bar == std::string::npos ? std::string::npos : bar - pos)));
			if (bar == std::string::npos)
				break;
			pos = bar + 1;
		}
		if (header) {
			for (std::size_t i = 1; i < fields.size(); ++i)
				t.discriminants.push_back(std::stoull(fields[i]));
			header = false;
			continue;
		}
		fields.resize(t.discriminants.size() + 1);
		t.primes.push_back(std::stoull(fields[0]));
		t.cells.emplace_back(fields.begin() + 1, fields.end());
	}
	return t;
}

inline nlohmann::json to_json(VerificationTable const& t)
{
	nlohmann::json rows = nlohmann::json::array();
	for (std::size_t i = 0; i < t.primes.size(); ++i)
		rows.push_back(nlohmann::json{{"p", t.primes[i]}, {"cells", t.cells[i]}});
	return nlohmann::json{{"discriminants", t.discriminants}, {"rows", rows}};
}

} // namespace vrprimes

#endif // VRPRIMES_SURVEY_HPP
