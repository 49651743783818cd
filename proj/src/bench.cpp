#include "tcsched/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>
#include <tuple>

#include "tcsched/exact.hpp"
#include "tcsched/io.hpp"
#include "tcsched/validator.hpp"

namespace tcs::bench {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start)
{
	return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

const char* status_label(Status s)
{
	switch (s) {
	case Status::Feasible: return "feasible";
	case Status::Infeasible: return "infeasible";
	case Status::TimedOut: return "timeout";
	case Status::Unschedulable: return "unschedulable";
	}
	return "?";
}

std::string rational_cell(const std::optional<metrics::Rational>& r)
{
	if (!r)
		return "";
	std::ostringstream os;
	os.precision(10);
	os << metrics::to_double(*r);
	return os.str();
}

std::ofstream open_out(const std::filesystem::path& path)
{
	if (path.has_parent_path())
		std::filesystem::create_directories(path.parent_path());
	std::ofstream out(path);
	if (!out)
		throw io::IoError("cannot write " + path.string());
	return out;
}

void require_valid(const Schedule& s, const TaskSet& ts, const std::string& what)
{
	auto report = validate(s, ts);
	if (!report.overall())
		throw UnsoundResult(what + ": " + report.summary());
}

exact::Objective objective_of(Engine e)
{
	return e == Engine::ExactJitter ? exact::Objective::MinimizeSlotChanges : exact::Objective::None;
}

// Schedules one taskset with success or failure; timeouts keep their status.
SolveOutcome solve_with(const TaskSet& ts, Engine engine, double timeout_s)
{
	if (is_exact(engine))
		return exact::solve(ts, {objective_of(engine), timeout_s});
	return heur::schedule(ts, mode_of(engine));
}

SolveOutcome merge_with(const exact::MergeResult& merge, Engine engine, double timeout_s)
{
	if (is_exact(engine))
		return exact::solve_adaptation(merge, {exact::Objective::MaximizeStability, timeout_s});
	return heur::adapt(merge, mode_of(engine));
}

void require_valid_merge(const exact::MergeResult& merge, const Schedule& s, const std::string& what)
{
	require_valid(s, merge.taskset, what);
	for (const auto& src : merge.sources) {
		auto report = validate_transition(src.schedule, s, merge.taskset);
		if (!report.overall())
			throw UnsoundResult(what + " switch: " + report.summary());
	}
}

struct Member {
	Status status = Status::Infeasible;
	std::optional<Schedule> schedule;
};

Member schedule_member(const TaskSet& ts, Engine engine, double timeout_s, const std::string& what)
{
	auto out = solve_with(ts, engine, timeout_s);
	Member m{out.status, std::nullopt};
	if (out.status == Status::Feasible) {
		require_valid(*out.schedule, ts, what);
		m.schedule = std::move(out.schedule);
	}
	return m;
}

}

const char* to_string(Engine e)
{
	switch (e) {
	case Engine::ExactNone: return "exact-none";
	case Engine::ExactJitter: return "exact-jitter";
	case Engine::Heur00: return "heur-00";
	case Engine::Heur01: return "heur-01";
	case Engine::Heur10: return "heur-10";
	case Engine::Heur11: return "heur-11";
	}
	return "?";
}

Engine parse_engine(const std::string& name)
{
	for (auto e : all_engines)
		if (name == to_string(e))
			return e;
	throw std::invalid_argument("unknown engine '" + name + "'");
}

bool is_exact(Engine e)
{
	return e == Engine::ExactNone || e == Engine::ExactJitter;
}

heur::SchedulerMode mode_of(Engine e)
{
	switch (e) {
	case Engine::Heur00: return heur::SchedulerMode::parse("00");
	case Engine::Heur01: return heur::SchedulerMode::parse("01");
	case Engine::Heur10: return heur::SchedulerMode::parse("10");
	case Engine::Heur11: return heur::SchedulerMode::parse("11");
	default: throw std::invalid_argument(std::string(to_string(e)) + " is not a heuristic engine");
	}
}

Engine engine_of(heur::SchedulerMode mode)
{
	return parse_engine("heur-" + mode.code());
}

void ExperimentPlan::check() const
{
	if (engines.empty())
		throw std::invalid_argument("experiment plan without engines");
	if (!(timeout_s > 0))
		throw std::invalid_argument("experiment timeout must be positive");
}

void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t)>& fn)
{
	const std::size_t count = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(n, 1));
	if (count == 1) {
		for (std::size_t i = 0; i < n; ++i)
			fn(i);
		return;
	}
	std::atomic<std::size_t> next{0};
	std::atomic<bool> failed{false};
	std::exception_ptr error;
	std::mutex error_mutex;
	auto work = [&] {
		for (std::size_t i = next++; i < n && !failed; i = next++) {
			try {
				fn(i);
			} catch (...) {
				std::lock_guard lock(error_mutex);
				if (!error)
					error = std::current_exception();
				failed = true;
			}
		}
	};
	std::vector<std::thread> pool;
	for (std::size_t w = 0; w < count; ++w)
		pool.emplace_back(work);
	for (auto& t : pool)
		t.join();
	if (error)
		std::rethrow_exception(error);
}

Corpus materialize(const gen::Manifest& manifest, unsigned workers)
{
	std::vector<const gen::ManifestEntry*> singles, doubles;
	for (const auto& e : manifest.entries)
		(e.pair ? doubles : singles).push_back(&e);

	Corpus c;
	c.tasksets.resize(singles.size());
	c.pairs.resize(doubles.size());
	parallel_for(singles.size(), workers, [&](std::size_t i) {
		const auto& e = *singles[i];
		c.tasksets[i] = {e.id, e.params, gen::generate(e.params)};
	});
	parallel_for(doubles.size(), workers, [&](std::size_t i) {
		const auto& e = *doubles[i];
		auto p = gen::generate_pairs(e.params, 1);
		c.pairs[i] = {e.id, e.params, std::move(p[0].first), std::move(p[0].second)};
	});
	return c;
}

Corpus load_corpus(const std::filesystem::path& manifest, unsigned workers)
{
	if (!std::filesystem::exists(manifest))
		throw MissingCorpus("corpus manifest " + manifest.string() + " does not exist");
	gen::Manifest m;
	try {
		m = gen::load_manifest(manifest);
	} catch (const std::exception& e) {
		throw MissingCorpus("corpus manifest " + manifest.string() + " is unreadable: " + e.what());
	}
	return materialize(m, workers);
}

ExperimentRow run_engine(const CorpusItem& item, Engine engine, double timeout_s)
{
	ExperimentRow row;
	row.taskset_id = item.id;
	row.engine = engine;
	row.params = item.params;
	const auto start = Clock::now();
	auto out = solve_with(item.taskset, engine, timeout_s);
	row.solve_ms = elapsed_ms(start);
	row.status = out.status;
	if (out.schedule && (out.status == Status::Feasible || out.status == Status::TimedOut)) {
		require_valid(*out.schedule, item.taskset, item.id + " " + to_string(engine));
		if (out.status == Status::Feasible) {
			row.jitter = metrics::jitter(*out.schedule, item.taskset);
			row.distribution = metrics::distribution(*out.schedule);
			row.schedule = std::move(out.schedule);
		}
	}
	return row;
}

std::vector<AggregateRow> aggregate(std::span<const ExperimentRow> rows)
{
	using Key = std::tuple<std::string, int, Engine>;
	std::map<Key, AggregateRow> groups;
	for (const auto& r : rows) {
		const std::pair<const char*, int> swept[] = {
			{"hyperperiod", r.params.hyperperiod}, {"dependencies", r.params.dependencies}, {"jobs", r.params.jobs},
			{"tasks", r.params.tasks},             {"nodes", r.params.nodes},               {"channels", r.params.channels},
		};
		for (auto [name, value] : swept) {
			auto& g = groups[{name, value, r.engine}];
			g.parameter = name;
			g.value = value;
			g.engine = r.engine;
			if (r.status == Status::TimedOut) {
				++g.timeouts;
				continue;
			}
			++g.decided;
			g.scheduled += r.status == Status::Feasible;
		}
	}
	std::vector<AggregateRow> out;
	for (auto& [key, g] : groups)
		out.push_back(g);
	return out;
}

SchedulabilityResult run_schedulability(std::span<const CorpusItem> corpus, const ExperimentPlan& plan)
{
	plan.check();
	const std::size_t E = plan.engines.size();
	SchedulabilityResult result;
	result.rows.resize(corpus.size() * E);
	parallel_for(result.rows.size(), plan.workers, [&](std::size_t k) {
		result.rows[k] = run_engine(corpus[k / E], plan.engines[k % E], plan.timeout_s);
	});
	result.aggregate = aggregate(result.rows);
	return result;
}

std::optional<double> spearman(std::span<const double> x, std::span<const double> y)
{
	if (x.size() != y.size())
		throw std::invalid_argument("spearman needs equal-length samples");
	const std::size_t n = x.size();
	if (n < 2)
		return std::nullopt;
	auto ranks = [n](std::span<const double> v) {
		std::vector<std::size_t> order(n);
		for (std::size_t i = 0; i < n; ++i)
			order[i] = i;
		std::sort(order.begin(), order.end(), [&](auto a, auto b) { return v[a] < v[b]; });
		std::vector<double> r(n);
		for (std::size_t i = 0; i < n;) {
			std::size_t j = i;
			while (j + 1 < n && v[order[j + 1]] == v[order[i]])
				++j;
			const double avg = (static_cast<double>(i + j) / 2) + 1;
			for (std::size_t k = i; k <= j; ++k)
				r[order[k]] = avg;
			i = j + 1;
		}
		return r;
	};
	const auto rx = ranks(x);
	const auto ry = ranks(y);
	double mx = 0, my = 0;
	for (std::size_t i = 0; i < n; ++i) {
		mx += rx[i];
		my += ry[i];
	}
	mx /= static_cast<double>(n);
	my /= static_cast<double>(n);
	double sxy = 0, sxx = 0, syy = 0;
	for (std::size_t i = 0; i < n; ++i) {
		sxy += (rx[i] - mx) * (ry[i] - my);
		sxx += (rx[i] - mx) * (rx[i] - mx);
		syy += (ry[i] - my) * (ry[i] - my);
	}
	if (sxx == 0 || syy == 0)
		return std::nullopt;
	return sxy / std::sqrt(sxx * syy);
}

HypothesisResult run_hypothesis(std::span<const PairItem> pairs, const HypothesisOptions& options)
{
	if (!(options.bin_width > 0))
		throw std::invalid_argument("bin width must be positive");
	if (options.sources.empty())
		throw std::invalid_argument("hypothesis run without source engines");
	struct Entry {
		bool skipped = false;
		HypothesisRow row;
	};
	std::vector<Entry> slots(pairs.size());
	parallel_for(pairs.size(), options.workers, [&](std::size_t i) {
		const auto& p = pairs[i];
		const Engine source = options.sources[i % options.sources.size()];
		auto a = schedule_member(p.first, source, options.timeout_s, p.id + " first");
		auto b = schedule_member(p.second, source, options.timeout_s, p.id + " second");
		if (!a.schedule || !b.schedule) {
			slots[i].skipped = true;
			return;
		}
		auto merge = exact::merge_schedules(*a.schedule, *b.schedule, p.first, p.second);
		auto& row = slots[i].row;
		row.pair_id = p.id;
		row.distribution = metrics::distribution(*a.schedule) + metrics::distribution(*b.schedule);
		const auto start = Clock::now();
		auto out = merge_with(merge, options.merge, options.timeout_s);
		row.solve_ms = elapsed_ms(start);
		row.status = out.status;
		if (out.status == Status::Feasible)
			require_valid_merge(merge, *out.schedule, p.id + " merge");
	});

	HypothesisResult result;
	const int bin_count = static_cast<int>(std::ceil(2.0 / options.bin_width - 1e-9));
	std::vector<HypothesisBin> bins(bin_count);
	for (int b = 0; b < bin_count; ++b) {
		bins[b].lo = b * options.bin_width;
		bins[b].hi = std::min(2.0, (b + 1) * options.bin_width);
	}
	for (auto& s : slots) {
		if (s.skipped) {
			++result.skipped;
			continue;
		}
		if (s.row.status == Status::TimedOut) {
			++result.timeouts;
			result.rows.push_back(std::move(s.row));
			continue;
		}
		const double d = metrics::to_double(s.row.distribution);
		const int b = std::clamp(static_cast<int>(std::floor(d / options.bin_width + 1e-12)), 0, bin_count - 1);
		++bins[b].pairs;
		bins[b].successes += s.row.status == Status::Feasible;
		result.rows.push_back(std::move(s.row));
	}
	std::vector<double> mid, frac;
	for (const auto& b : bins) {
		if (b.pairs == 0)
			continue;
		result.bins.push_back(b);
		if (b.pairs >= options.min_bin_pairs) {
			mid.push_back(b.midpoint());
			frac.push_back(b.fraction());
		}
	}
	result.spearman = spearman(mid, frac);
	return result;
}

MergeBenchmark run_merge_benchmark(std::span<const PairItem> pairs, const ExperimentPlan& plan)
{
	plan.check();
	const std::size_t E = plan.engines.size();
	struct Entry {
		bool skipped = false;
		MergeRow row;
	};
	std::vector<Entry> slots(pairs.size() * E);
	parallel_for(slots.size(), plan.workers, [&](std::size_t k) {
		const auto& p = pairs[k / E];
		const Engine engine = plan.engines[k % E];
		const std::string what = p.id + " " + to_string(engine);
		auto a = schedule_member(p.first, engine, plan.timeout_s, what + " first");
		auto b = schedule_member(p.second, engine, plan.timeout_s, what + " second");
		auto& row = slots[k].row;
		row.pair_id = p.id;
		row.engine = engine;
		if (!a.schedule || !b.schedule) {
			slots[k].skipped = true;
			return;
		}
		auto merge = exact::merge_schedules(*a.schedule, *b.schedule, p.first, p.second);
		const auto start = Clock::now();
		auto out = merge_with(merge, engine, plan.timeout_s);
		row.solve_ms = elapsed_ms(start);
		row.status = out.status;
		if (out.status == Status::Feasible) {
			require_valid_merge(merge, *out.schedule, what + " merge");
			row.stability = metrics::stability(merge.combined, *out.schedule);
			row.distribution = metrics::distribution(*out.schedule);
		}
	});

	MergeBenchmark result;
	std::vector<MergeSummary> summary(E);
	for (std::size_t e = 0; e < E; ++e)
		summary[e].engine = plan.engines[e];
	for (std::size_t k = 0; k < slots.size(); ++k) {
		auto& s = summary[k % E];
		if (slots[k].skipped) {
			++s.skipped;
			continue;
		}
		const auto& row = slots[k].row;
		if (row.status == Status::TimedOut)
			++s.timeouts;
		else {
			++s.attempted;
			s.merged += row.status == Status::Feasible;
		}
		result.rows.push_back(row);
	}
	for (auto& s : summary)
		if (s.attempted + s.timeouts + s.skipped > 0)
			result.summary.push_back(s);
	return result;
}

std::vector<CdfPoint> cdf_points(std::span<const double> values)
{
	if (values.empty())
		throw EmptyInput("CDF of an empty sample");
	std::vector<double> v(values.begin(), values.end());
	std::sort(v.begin(), v.end());
	std::vector<CdfPoint> points;
	const double n = static_cast<double>(v.size());
	for (std::size_t i = 0; i < v.size(); ++i)
		if (i + 1 == v.size() || v[i + 1] != v[i])
			points.push_back({v[i], static_cast<double>(i + 1) / n});
	return points;
}

std::string cdf_svg(std::span<const CdfPoint> points, const std::string& label)
{
	if (points.empty())
		throw EmptyInput("CDF plot without points");
	constexpr double W = 480, Hpx = 320, margin = 40;
	const double lo = points.front().value;
	const double hi = points.back().value;
	const double span = hi > lo ? hi - lo : 1;
	auto px = [&](double v) { return margin + (v - lo) / span * (W - 2 * margin); };
	auto py = [&](double f) { return Hpx - margin - f * (Hpx - 2 * margin); };

	std::ostringstream os;
	os.precision(6);
	os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << Hpx << "\">\n";
	os << "<line x1=\"" << margin << "\" y1=\"" << py(0) << "\" x2=\"" << W - margin << "\" y2=\"" << py(0)
	   << "\" stroke=\"black\"/>\n";
	os << "<line x1=\"" << margin << "\" y1=\"" << py(0) << "\" x2=\"" << margin << "\" y2=\"" << py(1)
	   << "\" stroke=\"black\"/>\n";
	os << "<text x=\"" << W / 2 << "\" y=\"" << Hpx - 8 << "\" text-anchor=\"middle\">" << label << "</text>\n";
	os << "<text x=\"" << margin << "\" y=\"" << py(0) + 14 << "\" text-anchor=\"middle\">" << lo << "</text>\n";
	os << "<text x=\"" << W - margin << "\" y=\"" << py(0) + 14 << "\" text-anchor=\"middle\">" << hi << "</text>\n";
	os << "<polyline fill=\"none\" stroke=\"steelblue\" points=\"" << px(lo) << "," << py(0);
	double prev = 0;
	for (const auto& p : points) {
		os << " " << px(p.value) << "," << py(prev) << " " << px(p.value) << "," << py(p.fraction);
		prev = p.fraction;
	}
	os << "\"/>\n";
	os << "<circle class=\"max\" cx=\"" << px(hi) << "\" cy=\"" << py(1) << "\" r=\"4\" fill=\"red\"/>\n";
	os << "<text x=\"" << px(hi) << "\" y=\"" << py(1) - 8 << "\" text-anchor=\"end\">max " << hi << "</text>\n";
	os << "</svg>\n";
	return os.str();
}

std::vector<CdfPoint> emit_cdf(std::span<const double> values, const std::filesystem::path& stem,
                               const std::string& label)
{
	auto points = cdf_points(values);
	auto csv_path = stem;
	csv_path += ".csv";
	auto svg_path = stem;
	svg_path += ".svg";
	{
		auto out = open_out(csv_path);
		out.precision(10);
		out << "value,fraction,max\n";
		for (std::size_t i = 0; i < points.size(); ++i)
			out << points[i].value << "," << points[i].fraction << "," << (i + 1 == points.size()) << "\n";
	}
	io::write_text(svg_path, cdf_svg(points, label));
	return points;
}

std::vector<double> field_values(std::span<const ExperimentRow> rows, const std::string& field)
{
	std::vector<double> v;
	for (const auto& r : rows) {
		if (field == "solve_ms")
			v.push_back(r.solve_ms);
		else if (field == "jitter") {
			if (r.jitter)
				v.push_back(metrics::to_double(*r.jitter));
		} else if (field == "distribution") {
			if (r.distribution)
				v.push_back(metrics::to_double(*r.distribution));
		} else
			throw std::invalid_argument("unknown field '" + field + "'");
	}
	return v;
}

void write_rows_csv(const std::filesystem::path& path, std::span<const ExperimentRow> rows)
{
	auto out = open_out(path);
	out << "id,engine,status,feasible,solve_ms,jitter,distribution,stability,hyperperiod,dependencies,jobs,tasks,nodes,"
	       "channels\n";
	for (const auto& r : rows) {
		out << r.taskset_id << "," << to_string(r.engine) << "," << status_label(r.status) << ","
		    << (r.status == Status::Feasible) << "," << r.solve_ms << "," << rational_cell(r.jitter) << ","
		    << rational_cell(r.distribution) << "," << (r.stability ? std::to_string(*r.stability) : "") << ","
		    << r.params.hyperperiod << "," << r.params.dependencies << "," << r.params.jobs << "," << r.params.tasks
		    << "," << r.params.nodes << "," << r.params.channels << "\n";
	}
}

void write_aggregate_csv(const std::filesystem::path& path, std::span<const AggregateRow> rows)
{
	auto out = open_out(path);
	out << "parameter,value,engine,decided,scheduled,timeouts,fraction\n";
	for (const auto& r : rows)
		out << r.parameter << "," << r.value << "," << to_string(r.engine) << "," << r.decided << "," << r.scheduled
		    << "," << r.timeouts << "," << r.fraction() << "\n";
}

void write_hypothesis_csv(const std::filesystem::path& path, const HypothesisResult& result)
{
	auto out = open_out(path);
	out << "bin_lo,bin_hi,pairs,successes,fraction\n";
	for (const auto& b : result.bins)
		out << b.lo << "," << b.hi << "," << b.pairs << "," << b.successes << "," << b.fraction() << "\n";
	out << "# spearman," << (result.spearman ? std::to_string(*result.spearman) : "") << "\n";
	out << "# skipped," << result.skipped << "\n# timeouts," << result.timeouts << "\n";
}

void write_merge_csv(const std::filesystem::path& path, const MergeBenchmark& result)
{
	auto out = open_out(path);
	out << "engine,attempted,merged,timeouts,skipped,rate\n";
	for (const auto& s : result.summary)
		out << to_string(s.engine) << "," << s.attempted << "," << s.merged << "," << s.timeouts << "," << s.skipped
		    << "," << s.rate() << "\n";
}

void write_histogram_csv(const std::filesystem::path& path, const metrics::SlotHistogram& h)
{
	auto out = open_out(path);
	out << "t,probability\n";
	for (std::size_t t = 0; t < h.probability.size(); ++t)
		out << t + 1 << "," << h.probability[t] << "\n";
	out << "# reference," << h.reference << "\n";
}

}
