#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "tcsched/generator.hpp"
#include "tcsched/heuristic.hpp"
#include "tcsched/metrics.hpp"
#include "tcsched/outcome.hpp"
#include "tcsched/schedule.hpp"
#include "tcsched/taskset.hpp"

namespace tcs::bench {

enum class Engine { ExactNone, ExactJitter, Heur00, Heur01, Heur10, Heur11 };

inline constexpr Engine all_engines[] = {Engine::ExactNone, Engine::ExactJitter, Engine::Heur00,
                                         Engine::Heur01,    Engine::Heur10,      Engine::Heur11};

// "exact-none", "exact-jitter", "heur-00" ... "heur-11".
const char* to_string(Engine e);
Engine parse_engine(const std::string& name);
bool is_exact(Engine e);
// Throws std::invalid_argument for exact engines.
heur::SchedulerMode mode_of(Engine e);
Engine engine_of(heur::SchedulerMode mode);

class MissingCorpus : public std::runtime_error {
public:
	using std::runtime_error::runtime_error;
};

class EmptyInput : public std::invalid_argument {
public:
	using std::invalid_argument::invalid_argument;
};

// A schedule that fails re-validation. Experiments abort on it.
class UnsoundResult : public std::runtime_error {
public:
	using std::runtime_error::runtime_error;
};

struct CorpusItem {
	std::string id;
	gen::GenParams params;
	TaskSet taskset;
};

struct PairItem {
	std::string id;
	gen::GenParams params;
	TaskSet first;
	TaskSet second;
};

struct Corpus {
	std::vector<CorpusItem> tasksets;
	std::vector<PairItem> pairs;
};

// Regenerates every manifest entry from its parameters and seed.
Corpus materialize(const gen::Manifest& manifest, unsigned workers = 1);
// Throws MissingCorpus when the manifest does not exist or cannot be read.
Corpus load_corpus(const std::filesystem::path& manifest, unsigned workers = 1);

struct ExperimentPlan {
	std::filesystem::path manifest;
	std::vector<Engine> engines{std::begin(all_engines), std::end(all_engines)};
	double timeout_s = 60;
	std::filesystem::path out_dir = "out";
	unsigned workers = 1;

	// Throws std::invalid_argument without engines or with a non-positive timeout.
	void check() const;
};

struct ExperimentRow {
	std::string taskset_id;
	Engine engine = Engine::ExactNone;
	Status status = Status::Infeasible;
	double solve_ms = 0;
	std::optional<metrics::Rational> jitter;
	std::optional<metrics::Rational> distribution;
	std::optional<long long> stability;      // merges only
	gen::GenParams params;
	std::optional<Schedule> schedule;        // kept in memory, not written to CSV
};

// Runs fn(0..n-1) on at most `workers` threads. The first exception is
// rethrown after all workers stop.
void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t)>& fn);

// Solves one taskset with one engine and re-validates any schedule.
ExperimentRow run_engine(const CorpusItem& item, Engine engine, double timeout_s);

struct AggregateRow {
	std::string parameter;      // hyperperiod, dependencies, jobs, tasks, nodes, channels
	int value = 0;
	Engine engine = Engine::ExactNone;
	std::size_t decided = 0;    // rows without timeout
	std::size_t scheduled = 0;
	std::size_t timeouts = 0;

	double fraction() const { return decided ? static_cast<double>(scheduled) / static_cast<double>(decided) : 0; }
};

struct SchedulabilityResult {
	std::vector<ExperimentRow> rows;        // taskset-major, engine order of the plan
	std::vector<AggregateRow> aggregate;
};

SchedulabilityResult run_schedulability(std::span<const CorpusItem> corpus, const ExperimentPlan& plan);
std::vector<AggregateRow> aggregate(std::span<const ExperimentRow> rows);

struct HypothesisOptions {
	// Engines scheduling the members; pair i uses sources[i % size] for both.
	std::vector<Engine> sources{Engine::ExactNone};
	Engine merge = Engine::ExactNone;    // exact engines use solve_adaptation
	double bin_width = 0.2;
	std::size_t min_bin_pairs = 5;       // bins below this size stay out of the correlation
	double timeout_s = 60;
	unsigned workers = 1;
};

struct HypothesisRow {
	std::string pair_id;
	metrics::Rational distribution;      // sum over both member schedules
	Status status = Status::Infeasible;
	double solve_ms = 0;
};

struct HypothesisBin {
	double lo = 0;
	double hi = 0;
	std::size_t pairs = 0;
	std::size_t successes = 0;

	double midpoint() const { return (lo + hi) / 2; }
	double fraction() const { return pairs ? static_cast<double>(successes) / static_cast<double>(pairs) : 0; }
};

struct HypothesisResult {
	std::vector<HypothesisRow> rows;     // pairs with both members scheduled
	std::size_t skipped = 0;             // a member was not scheduled or timed out
	std::size_t timeouts = 0;            // merge timed out, excluded from bins
	std::vector<HypothesisBin> bins;     // non-empty bins over [0, 2]
	std::optional<double> spearman;      // over bins with >= min_bin_pairs, needs two
};

HypothesisResult run_hypothesis(std::span<const PairItem> pairs, const HypothesisOptions& options);

// Spearman rank correlation with average ranks for ties. Empty when fewer
// than two points or when a side is constant.
std::optional<double> spearman(std::span<const double> x, std::span<const double> y);

struct MergeRow {
	std::string pair_id;
	Engine engine = Engine::ExactNone;
	Status status = Status::Infeasible;
	double solve_ms = 0;
	std::optional<long long> stability;
	std::optional<metrics::Rational> distribution;
};

struct MergeSummary {
	Engine engine = Engine::ExactNone;
	std::size_t attempted = 0;    // both members scheduled by the engine, merge decided
	std::size_t merged = 0;
	std::size_t timeouts = 0;
	std::size_t skipped = 0;      // a member was not scheduled

	double rate() const { return attempted ? static_cast<double>(merged) / static_cast<double>(attempted) : 0; }
};

struct MergeBenchmark {
	std::vector<MergeRow> rows;
	std::vector<MergeSummary> summary;   // one per engine that had pairs
};

// Each engine schedules both members itself, exact-jitter sources use the
// jitter objective, then merges with solve_adaptation or adapt. Every merged
// schedule is checked with validate and validate_transition against both sources.
MergeBenchmark run_merge_benchmark(std::span<const PairItem> pairs, const ExperimentPlan& plan);

struct CdfPoint {
	double value = 0;
	double fraction = 0;
};

// Empirical CDF, one point per distinct value. Throws EmptyInput.
std::vector<CdfPoint> cdf_points(std::span<const double> values);
// Writes <stem>.csv and <stem>.svg and returns the points.
std::vector<CdfPoint> emit_cdf(std::span<const double> values, const std::filesystem::path& stem,
                               const std::string& label);
std::string cdf_svg(std::span<const CdfPoint> points, const std::string& label);

// Field accessor for CDFs over experiment rows: "solve_ms", "jitter", "distribution".
std::vector<double> field_values(std::span<const ExperimentRow> rows, const std::string& field);

void write_rows_csv(const std::filesystem::path& path, std::span<const ExperimentRow> rows);
void write_aggregate_csv(const std::filesystem::path& path, std::span<const AggregateRow> rows);
void write_hypothesis_csv(const std::filesystem::path& path, const HypothesisResult& result);
void write_merge_csv(const std::filesystem::path& path, const MergeBenchmark& result);
// t,probability plus the uniform reference in a comment row.
void write_histogram_csv(const std::filesystem::path& path, const metrics::SlotHistogram& h);

}
