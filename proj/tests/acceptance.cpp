// Acceptance driver: one PASS/FAIL line per criterion, exit status 0 iff all pass.
// Corpora are generated from fixed seeds; thresholds are pinned below.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "oracle.hpp"
#include "support.hpp"
#include "tcsched/bench.hpp"
#include "tcsched/exact.hpp"
#include "tcsched/generator.hpp"
#include "tcsched/heuristic.hpp"
#include "tcsched/metrics.hpp"
#include "tcsched/validator.hpp"

using namespace tcs;
using bench::Engine;
using metrics::Rational;

namespace {

// Criterion 1
constexpr int kOracleInstances = 1000;
constexpr int kOracleMaxTasks = 5;
constexpr int kOracleMaxH = 8;
constexpr int kOracleMaxM = 2;
constexpr double kOracleBudgetS = 60;
// Criterion 2 and 8
constexpr int kSoundnessPerPoint = 44;          // 115 grid points
constexpr std::size_t kSoundnessMinTasksets = 5000;
constexpr double kSoundnessTimeoutS = 1;
// Criterion 3
constexpr int kJitterPerPoint = 5;
constexpr std::size_t kJitterMinTasksets = 500;
constexpr double kJitterTimeoutS = 10;
constexpr double kJitterCeiling = 0.1;
// Criterion 4
constexpr int kHypothesisPairs = 3000;
constexpr std::size_t kHypothesisMinAnalysed = 500;
constexpr std::size_t kHypothesisMinBin = 10;
constexpr double kHypothesisBinWidth = 0.2;
constexpr double kSpearmanFloor = 0.5;
// Criterion 5
constexpr int kStandardPerPoint = 20;
constexpr std::size_t kStandardMinTasksets = 2000;
constexpr int kWorstPairsPerH = 600;
constexpr std::size_t kMinPairs = 500;
// Criterion 6
constexpr double kMergeFloor = 0.40;
// Criterion 7
constexpr int kHistogramTasksets = 600;
constexpr double kHistogramTimeoutS = 5;
// Criterion 8
constexpr double kHeuristicFastMs = 1000;
constexpr double kHeuristicFastShare = 0.95;

struct Line {
	int id;
	std::string name;
	bool pass;
	std::string detail;
};

unsigned workers()
{
	return std::max(1u, std::thread::hardware_concurrency());
}

std::string fmt(double v, int digits = 4)
{
	std::ostringstream os;
	os.precision(digits);
	os << v;
	return os.str();
}

// Parameter grid of the evaluation: hyperperiods, dependency, job and task
// counts; points that cannot be generated are left out.
std::vector<gen::GenParams> evaluation_grid(gen::Range jitter)
{
	std::vector<gen::GenParams> grid;
	for (int H : {8, 12, 16, 25, 35})
		for (int deps : {9, 12, 16, 24})
			for (int jobs : {1, 3, 6})
				for (int tasks : {8, 12}) {
					gen::GenParams p;
					p.hyperperiod = H;
					p.dependencies = deps;
					p.jobs = jobs;
					p.tasks = tasks;
					p.nodes = tasks;
					p.jitter = jitter;
					try {
						gen::check(p);
					} catch (const gen::InfeasibleParams&) {
						continue;
					}
					grid.push_back(p);
				}
	return grid;
}

bench::Corpus corpus_of(const std::vector<gen::GenParams>& grid, int count, bool pairs, std::uint64_t seed)
{
	return bench::materialize(gen::make_manifest(grid, count, pairs, seed, pairs ? "pair" : "ts"), workers());
}

double quantile(std::vector<double> v, double q)
{
	std::sort(v.begin(), v.end());
	const double pos = q * static_cast<double>(v.size() - 1);
	const auto lo = static_cast<std::size_t>(std::floor(pos));
	const auto hi = std::min(lo + 1, v.size() - 1);
	return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

double iqr(const std::vector<double>& v)
{
	return quantile(v, 0.75) - quantile(v, 0.25);
}

// Tally of independent re-validation over every emitted schedule.
struct Soundness {
	std::size_t schedules = 0;
	std::size_t invalid = 0;
	std::size_t merges = 0;
	std::size_t invalid_merges = 0;
	std::string first_failure;

	void schedule(const Schedule& s, const TaskSet& ts, const std::string& what)
	{
		++schedules;
		auto r = validate(s, ts);
		if (!r.overall()) {
			++invalid;
			if (first_failure.empty())
				first_failure = what + ": " + r.summary();
		}
	}

	void merge(const exact::MergeResult& m, const Schedule& s, const std::string& what)
	{
		++merges;
		bool ok = validate(s, m.taskset).overall();
		for (const auto& src : m.sources)
			ok = ok && validate_transition(src.schedule, s, m.taskset).overall();
		if (!ok) {
			++invalid_merges;
			if (first_failure.empty())
				first_failure = what + ": merged schedule rejected";
		}
	}

	void rows(std::span<const bench::ExperimentRow> rows, std::span<const bench::CorpusItem> corpus)
	{
		std::map<std::string, const TaskSet*> by_id;
		for (const auto& c : corpus)
			by_id[c.id] = &c.taskset;
		for (const auto& r : rows)
			if (r.schedule)
				schedule(*r.schedule, *by_id.at(r.taskset_id), r.taskset_id + " " + bench::to_string(r.engine));
	}
};

Line oracle_equivalence()
{
	std::mt19937_64 rng(20240601);
	int status_match = 0, optimum_match = 0, feasible = 0, timeouts = 0;
	for (int k = 0; k < kOracleInstances; ++k) {
		auto ts = test::random_small(rng, kOracleMaxTasks, kOracleMaxH, kOracleMaxM);
		auto oracle = test::enumerate(ts);
		auto none = exact::solve(ts, {exact::Objective::None, kOracleBudgetS});
		auto obj = exact::solve(ts, {exact::Objective::MinimizeSlotChanges, kOracleBudgetS});
		timeouts += (none.status == Status::TimedOut) + (obj.status == Status::TimedOut);
		const bool agree = (none.status == Status::Feasible) == oracle.feasible &&
		                   (obj.status == Status::Feasible) == oracle.feasible;
		status_match += agree;
		if (oracle.feasible) {
			++feasible;
			optimum_match += obj.schedule && exact::slot_changes(*obj.schedule, ts) == oracle.min_changes;
		}
	}
	const bool pass = status_match == kOracleInstances && optimum_match == feasible && timeouts == 0;
	return {1, "oracle equivalence", pass,
	        std::to_string(status_match) + "/" + std::to_string(kOracleInstances) + " statuses, " +
	            std::to_string(optimum_match) + "/" + std::to_string(feasible) + " slot-change optima, " +
	            std::to_string(timeouts) + " timeouts (tolerance 0)"};
}

struct SharedRuns {
	bench::Corpus soundness;
	bench::SchedulabilityResult soundness_rows;
	bench::Corpus worst_pairs;
	Soundness checks;
};

// Schedules and merges every worst-case pair with each engine, validating
// every result independently of the benchmark code.
std::map<Engine, std::pair<std::size_t, std::size_t>> independent_merges(const bench::Corpus& pairs,
                                                                          std::span<const Engine> engines,
                                                                          Soundness& checks)
{
	std::map<Engine, std::pair<std::size_t, std::size_t>> tally;   // merged, attempted
	for (auto e : engines) {
		for (const auto& p : pairs.pairs) {
			auto solve = [&](const TaskSet& ts) {
				return bench::is_exact(e) ? exact::solve(ts, {exact::Objective::None, kSoundnessTimeoutS * 10})
				                          : heur::schedule(ts, bench::mode_of(e));
			};
			auto a = solve(p.first);
			auto b = solve(p.second);
			if (a.status != Status::Feasible || b.status != Status::Feasible)
				continue;
			checks.schedule(*a.schedule, p.first, p.id + " first");
			checks.schedule(*b.schedule, p.second, p.id + " second");
			auto m = exact::merge_schedules(*a.schedule, *b.schedule, p.first, p.second);
			auto out = bench::is_exact(e)
			               ? exact::solve_adaptation(m, {exact::Objective::MaximizeStability, kSoundnessTimeoutS * 10})
			               : heur::adapt(m, bench::mode_of(e));
			if (out.status == Status::TimedOut)
				continue;
			++tally[e].second;
			if (out.status == Status::Feasible) {
				++tally[e].first;
				checks.merge(m, *out.schedule, p.id + " " + bench::to_string(e));
			}
		}
	}
	return tally;
}

Line jitter_objective(Soundness& checks)
{
	auto corpus = corpus_of(evaluation_grid({0, 2}), kJitterPerPoint, false, 303);
	bench::ExperimentPlan plan;
	plan.engines = {Engine::ExactNone, Engine::ExactJitter};
	plan.timeout_s = kJitterTimeoutS;
	plan.workers = workers();
	auto result = bench::run_schedulability(corpus.tasksets, plan);
	checks.rows(result.rows, corpus.tasksets);

	double sum_none = 0, sum_obj = 0;
	std::size_t both = 0, timeouts = 0;
	for (std::size_t t = 0; t < corpus.tasksets.size(); ++t) {
		const auto& none = result.rows[2 * t];
		const auto& obj = result.rows[2 * t + 1];
		timeouts += (none.status == Status::TimedOut) + (obj.status == Status::TimedOut);
		if (!none.jitter || !obj.jitter)
			continue;
		++both;
		sum_none += metrics::to_double(*none.jitter);
		sum_obj += metrics::to_double(*obj.jitter);
	}
	const double mean_none = both ? sum_none / static_cast<double>(both) : 0;
	const double mean_obj = both ? sum_obj / static_cast<double>(both) : 0;
	const bool pass = corpus.tasksets.size() >= kJitterMinTasksets && both > 0 && mean_obj <= kJitterCeiling &&
	                  mean_obj <= mean_none;
	return {3, "jitter objective effect", pass,
	        "mean jitter " + fmt(mean_obj) + " with objective vs " + fmt(mean_none) + " without over " +
	            std::to_string(both) + " tasksets feasible under both (" + std::to_string(corpus.tasksets.size()) +
	            " generated, " + std::to_string(timeouts) + " timed-out runs excluded, ceiling " + fmt(kJitterCeiling) +
	            ")"};
}

Line distribution_hypothesis(std::string& info)
{
	gen::GenParams p;
	p.hyperperiod = 24;
	p.jobs = 1;
	p.tasks = 8;
	p.dependencies = 9;
	p.nodes = 8;
	p.jitter = {0, 2};
	auto corpus = corpus_of({p}, kHypothesisPairs, true, 404);
	bench::HypothesisOptions opt;
	opt.sources = {Engine::ExactNone, Engine::Heur10, Engine::Heur11};
	opt.merge = Engine::Heur10;
	opt.bin_width = kHypothesisBinWidth;
	opt.min_bin_pairs = kHypothesisMinBin;
	opt.timeout_s = kSoundnessTimeoutS * 10;
	opt.workers = workers();
	auto r = bench::run_hypothesis(corpus.pairs, opt);

	std::string bins;
	for (const auto& b : r.bins)
		bins += " [" + fmt(b.lo, 2) + "," + fmt(b.hi, 2) + "):" + std::to_string(b.successes) + "/" +
		        std::to_string(b.pairs);

	auto exact_opt = opt;
	exact_opt.merge = Engine::ExactNone;
	auto ex = bench::run_hypothesis(corpus.pairs, exact_opt);
	info = "exact adaptation on the same pairs: spearman " + (ex.spearman ? fmt(*ex.spearman) : std::string("n/a")) +
	       ", bins";
	for (const auto& b : ex.bins)
		info += " [" + fmt(b.lo, 2) + "," + fmt(b.hi, 2) + "):" + std::to_string(b.successes) + "/" +
		        std::to_string(b.pairs);

	const bool pass = r.rows.size() >= kHypothesisMinAnalysed && r.spearman && *r.spearman > kSpearmanFloor;
	return {4, "distribution hypothesis", pass,
	        "spearman " + (r.spearman ? fmt(*r.spearman) : std::string("n/a")) + " > " + fmt(kSpearmanFloor) +
	            " over " + std::to_string(r.rows.size()) + " analysed pairs, bins" + bins};
}

std::vector<Line> mode_dominance_and_floor(SharedRuns& shared)
{
	auto standard = corpus_of(evaluation_grid({1, 3}), kStandardPerPoint, false, 505);
	bench::ExperimentPlan plan;
	plan.engines = {Engine::Heur00, Engine::Heur01, Engine::Heur10, Engine::Heur11};
	plan.timeout_s = 1;
	plan.workers = workers();
	auto rows = bench::run_schedulability(standard.tasksets, plan);
	shared.checks.rows(rows.rows, standard.tasksets);
	std::map<Engine, std::size_t> scheduled;
	for (const auto& r : rows.rows)
		scheduled[r.engine] += r.status == Status::Feasible;
	const std::size_t tf = scheduled[Engine::Heur00] + scheduled[Engine::Heur01];
	const std::size_t cf = scheduled[Engine::Heur10] + scheduled[Engine::Heur11];

	auto merge = bench::run_merge_benchmark(shared.worst_pairs.pairs, plan);
	std::map<Engine, bench::MergeSummary> by;
	for (const auto& s : merge.summary)
		by[s.engine] = s;
	auto pooled = [&](Engine a, Engine b) {
		const double n = static_cast<double>(by[a].attempted + by[b].attempted);
		return n > 0 ? static_cast<double>(by[a].merged + by[b].merged) / n : 0.0;
	};
	const double tf_rate = pooled(Engine::Heur00, Engine::Heur01);
	const double cf_rate = pooled(Engine::Heur10, Engine::Heur11);

	std::string per_mode;
	for (auto e : plan.engines)
		per_mode += std::string(" ") + bench::to_string(e) + " " + std::to_string(by[e].merged) + "/" +
		            std::to_string(by[e].attempted);

	const bool sizes = standard.tasksets.size() >= kStandardMinTasksets && shared.worst_pairs.pairs.size() >= kMinPairs;
	Line five{5, "mode dominance", sizes && cf >= tf && cf_rate >= tf_rate,
	          "schedulable ChannelFirst " + std::to_string(cf) + " >= TimeFirst " + std::to_string(tf) + " of " +
	              std::to_string(2 * standard.tasksets.size()) + " runs; merge ChannelFirst " + fmt(cf_rate) +
	              " >= TimeFirst " + fmt(tf_rate) + " over " + std::to_string(shared.worst_pairs.pairs.size()) +
	              " pairs"};

	const double r10 = by[Engine::Heur10].rate();
	const double r11 = by[Engine::Heur11].rate();
	Line six{6, "merge success floor",
	         by[Engine::Heur10].attempted > 0 && by[Engine::Heur11].attempted > 0 && r10 >= kMergeFloor &&
	             r11 >= kMergeFloor,
	         "ChannelFirst merge success heur-10 " + fmt(r10) + ", heur-11 " + fmt(r11) + " (floor " + fmt(kMergeFloor) +
	             "); per mode" + per_mode};

	// the independent tally must agree with the benchmark summary
	const Engine all[] = {Engine::Heur00, Engine::Heur01, Engine::Heur10, Engine::Heur11, Engine::ExactNone};
	auto tally = independent_merges(shared.worst_pairs, all, shared.checks);
	bool consistent = true;
	for (auto e : plan.engines)
		consistent = consistent && tally[e].first == by[e].merged && tally[e].second == by[e].attempted;
	if (!consistent) {
		five.pass = six.pass = false;
		five.detail += "; benchmark summary disagrees with the independent tally";
	}
	return {five, six};
}

Line slot_histogram(Soundness& checks, std::filesystem::path out)
{
	gen::GenParams p;
	p.hyperperiod = 24;
	p.jobs = 3;
	p.tasks = 8;
	p.dependencies = 5;
	p.nodes = 8;
	p.jitter = {1, 3};
	auto corpus = corpus_of({p}, kHistogramTasksets, false, 707);
	bench::ExperimentPlan plan;
	plan.engines = {Engine::ExactNone, Engine::Heur00, Engine::Heur01, Engine::Heur10, Engine::Heur11};
	plan.timeout_s = kHistogramTimeoutS;
	plan.workers = workers();
	auto r = bench::run_schedulability(corpus.tasksets, plan);
	checks.rows(r.rows, corpus.tasksets);

	std::vector<Schedule> exact_s, cf_s, tf_s;
	for (const auto& row : r.rows) {
		if (!row.schedule)
			continue;
		if (row.engine == Engine::ExactNone)
			exact_s.push_back(*row.schedule);
		else if (bench::mode_of(row.engine).shifting == heur::Shifting::ChannelFirst)
			cf_s.push_back(*row.schedule);
		else
			tf_s.push_back(*row.schedule);
	}
	struct Shape {
		double divisor = 0, other = 0, first = 0, mean = 0;
	};
	auto shape = [&](const std::vector<Schedule>& s, const std::string& name) {
		Shape sh;
		if (s.empty())
			return sh;
		auto h = metrics::slot_histogram(s);
		bench::write_histogram_csv(out / ("slots-H24-" + name + ".csv"), h);
		int nd = 0, no = 0;
		for (int t = 1; t <= 24; ++t) {
			const double v = h.probability[t - 1];
			(24 % t == 0 ? sh.divisor : sh.other) += v;
			(24 % t == 0 ? nd : no) += 1;
			sh.mean += v / 24;
		}
		sh.divisor /= nd;
		sh.other /= no;
		sh.first = h.probability[0];
		return sh;
	};
	const auto cf = shape(cf_s, "channel-first");
	const auto tf = shape(tf_s, "time-first");
	const auto ex = shape(exact_s, "exact");
	const bool pass = !cf_s.empty() && !exact_s.empty() && cf.divisor > cf.other && ex.divisor <= ex.other &&
	                  ex.first > ex.mean;
	return {7, "slot histogram shape", pass,
	        "ChannelFirst divisor " + fmt(cf.divisor) + " > other " + fmt(cf.other) + " (" +
	            std::to_string(cf_s.size()) + " schedules); exact divisor " + fmt(ex.divisor) + " <= other " +
	            fmt(ex.other) + ", slot 1 " + fmt(ex.first) + " > mean " + fmt(ex.mean) + " (" +
	            std::to_string(exact_s.size()) + "); TimeFirst divisor " + fmt(tf.divisor) + " vs other " + fmt(tf.other)};
}

Line runtime_predictability(const SharedRuns& shared)
{
	std::vector<double> exact_ms;
	std::map<Engine, std::vector<double>> heur_ms;
	std::map<int, std::vector<double>> exact_by_h, heur_by_h;
	for (const auto& r : shared.soundness_rows.rows) {
		if (bench::is_exact(r.engine)) {
			exact_ms.push_back(r.solve_ms);
			exact_by_h[r.params.hyperperiod].push_back(r.solve_ms);
		} else {
			heur_ms[r.engine].push_back(r.solve_ms);
			if (r.engine == Engine::Heur00)
				heur_by_h[r.params.hyperperiod].push_back(r.solve_ms);
		}
	}
	bool fast = true;
	double worst_share = 1;
	for (const auto& [e, v] : heur_ms) {
		const auto n = std::count_if(v.begin(), v.end(), [](double ms) { return ms < kHeuristicFastMs; });
		const double share = static_cast<double>(n) / static_cast<double>(v.size());
		worst_share = std::min(worst_share, share);
		fast = fast && share >= kHeuristicFastShare;
	}
	const double iqr_exact = iqr(exact_ms);
	const double iqr_heur = iqr(heur_ms[Engine::Heur00]);
	std::string medians;
	for (const auto& [H, v] : exact_by_h)
		medians += " H" + std::to_string(H) + " " + fmt(quantile(v, 0.5), 3) + "/" + fmt(quantile(heur_by_h[H], 0.5), 3);
	return {8, "heuristic runtime predictability", fast && iqr_heur < iqr_exact,
	        "slowest mode has " + fmt(100 * worst_share) + "% of tasksets under 1 s (floor " +
	            fmt(100 * kHeuristicFastShare) + "%); solve-time IQR heur-00 " + fmt(iqr_heur) + " ms < exact " +
	            fmt(iqr_exact) + " ms; median ms exact/heur-00:" + medians};
}

Line metric_units()
{
	using test::from_times;
	using test::make_taskset;
	int ok = 0, total = 0;
	auto expect = [&](bool c) {
		++total;
		ok += c;
	};
	auto one = make_taskset(1, {{0, 0, 1}}, {}, {{0, 5, 0, {0}}, {1, 10, 0, {0}}});
	expect(metrics::jitter(from_times(10, 1, {{0, {2, 7}}}), one) == Rational(0));
	expect(metrics::jitter(from_times(10, 1, {{0, {2, 8}}}), one) == Rational(1, 2));
	auto two = make_taskset(1, {{0, 0, 1}, {1, 1, 1}}, {}, {{0, 5, 0, {0}}, {1, 5, 1, {1}}, {2, 10, 1, {1}}});
	expect(metrics::jitter(from_times(10, 1, {{0, {2, 7}}, {1, {3, 9}}}), two) == Rational(1, 4));
	expect(metrics::jitter(Schedule(0, 1), TaskSet::build({})) == Rational(0));

	auto sparse = from_times(6, 1, {{0, {1}}, {1, {4}}, {2, {6}}});
	expect(metrics::distribution(sparse) == Rational(2, 3));
	expect(metrics::distribution(from_times(3, 1, {{0, {1}}, {1, {2}}, {2, {3}}})) == Rational(0));
	expect(metrics::distribution(from_times(2, 1, {{0, {1}}})) == Rational(1));
	expect(metrics::distribution(Schedule(4, 2)) == Rational(0));
	auto other = from_times(6, 1, {{3, {2}}});
	expect(metrics::distribution(sparse) + metrics::distribution(other) == Rational(2, 3) + Rational(1));

	auto s = from_times(6, 2, {{0, {1}}, {1, {3}}, {2, {5}}});
	expect(metrics::stability(s, s) == 3);
	expect(metrics::stability(s, from_times(6, 2, {{0, {2}}, {1, {4}}, {2, {6}}})) == 0);
	auto moved = from_times(6, 2, {{0, {1}}, {1, {4}}, {2, {5}}});
	expect(metrics::stability(s, moved) == 2);
	expect(metrics::stability(moved, s) == 2);

	auto a = from_times(4, 1, {{0, {1}}, {1, {3}}});
	auto b = from_times(4, 1, {{0, {1}}});
	std::vector<Schedule> single{a}, pair{a, b};
	expect(metrics::slot_histogram(single).probability == std::vector<double>{1, 0, 1, 0});
	auto h = metrics::slot_histogram(pair);
	expect(h.probability[2] == 0.5 && h.probability[0] == 1);

	return {9, "metric unit correctness", ok == total,
	        std::to_string(ok) + "/" + std::to_string(total) + " examples exact (rational, tolerance 0)"};
}

}

int main(int argc, char** argv)
{
	const std::filesystem::path out = argc > 1 ? argv[1] : "acceptance-out";
	std::filesystem::create_directories(out);
	auto clock = std::chrono::steady_clock::now();
	auto lap = [&](const char* what) {
		auto now = std::chrono::steady_clock::now();
		std::cerr << "  " << what << " done in " << std::chrono::duration<double>(now - clock).count() << " s\n";
		clock = now;
	};

	std::vector<Line> lines;
	SharedRuns shared;
	std::string hypothesis_info;
	try {
		lines.push_back(oracle_equivalence());
		lap("oracle equivalence");

		shared.soundness = corpus_of(evaluation_grid({0, 2}), kSoundnessPerPoint, false, 202);
		bench::ExperimentPlan plan;
		plan.engines = {Engine::ExactNone, Engine::Heur00, Engine::Heur01, Engine::Heur10, Engine::Heur11};
		plan.timeout_s = kSoundnessTimeoutS;
		plan.workers = workers();
		shared.soundness_rows = bench::run_schedulability(shared.soundness.tasksets, plan);
		shared.checks.rows(shared.soundness_rows.rows, shared.soundness.tasksets);
		bench::write_rows_csv(out / "soundness-rows.csv", shared.soundness_rows.rows);
		bench::write_aggregate_csv(out / "soundness-schedulability.csv", shared.soundness_rows.aggregate);
		for (auto e : {Engine::ExactNone, Engine::Heur00}) {
			std::vector<bench::ExperimentRow> mine;
			for (const auto& r : shared.soundness_rows.rows)
				if (r.engine == e)
					mine.push_back(r);
			bench::emit_cdf(bench::field_values(mine, "solve_ms"), out / (std::string("solve_ms-") + bench::to_string(e)),
			                std::string(bench::to_string(e)) + " solve time [ms]");
		}
		lap("soundness corpus");

		lines.push_back(jitter_objective(shared.checks));
		lap("jitter objective");

		lines.push_back(distribution_hypothesis(hypothesis_info));
		lap("distribution hypothesis");

		gen::GenParams w;
		w.jobs = 1;
		w.tasks = 8;
		w.dependencies = 9;
		w.nodes = 8;
		w.jitter = {1, 3};
		auto w12 = w, w24 = w;
		w12.hyperperiod = 12;
		w24.hyperperiod = 24;
		shared.worst_pairs = corpus_of({w12, w24}, kWorstPairsPerH, true, 606);
		for (auto& l : mode_dominance_and_floor(shared))
			lines.push_back(l);
		lap("mode dominance and merge floor");

		lines.push_back(slot_histogram(shared.checks, out));
		lap("slot histogram");

		lines.push_back(runtime_predictability(shared));
		lines.push_back(metric_units());
	} catch (const std::exception& e) {
		std::cout << "[FAIL] aborted: " << e.what() << "\n";
		return 1;
	}

	const auto& c = shared.checks;
	lines.push_back({2, "soundness",
	                 c.invalid == 0 && c.invalid_merges == 0 && shared.soundness.tasksets.size() >= kSoundnessMinTasksets &&
	                     c.merges > 0,
	                 std::to_string(c.schedules - c.invalid) + "/" + std::to_string(c.schedules) +
	                     " schedules valid, " + std::to_string(c.merges - c.invalid_merges) + "/" +
	                     std::to_string(c.merges) + " merges pass both validators; soundness corpus " +
	                     std::to_string(shared.soundness.tasksets.size()) + " tasksets" +
	                     (c.first_failure.empty() ? "" : "; first failure " + c.first_failure)});

	std::sort(lines.begin(), lines.end(), [](const Line& a, const Line& b) { return a.id < b.id; });
	bool all = true;
	std::ostringstream report;
	for (const auto& l : lines) {
		report << (l.pass ? "[PASS] " : "[FAIL] ") << l.id << " " << l.name << ": " << l.detail << "\n";
		all = all && l.pass;
	}
	report << "       info: " << hypothesis_info << "\n";
	report << (all ? "all criteria passed" : "some criteria failed") << "\n";
	std::cout << report.str();
	std::ofstream(out / "summary.txt") << report.str();
	return all ? 0 : 1;
}
