// tc-sched: generate tasksets, schedule them exactly or heuristically, merge,
// validate and run benchmark experiments.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "tcsched/bench.hpp"
#include "tcsched/exact.hpp"
#include "tcsched/generator.hpp"
#include "tcsched/heuristic.hpp"
#include "tcsched/io.hpp"
#include "tcsched/lp.hpp"
#include "tcsched/metrics.hpp"
#include "tcsched/validator.hpp"

using namespace tcs;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

enum Exit { Ok = 0, Failure = 1, Negative = 2, Timeout = 3 };

int exit_for(Status s)
{
	switch (s) {
	case Status::Feasible: return Ok;
	case Status::TimedOut: return Timeout;
	default: return Negative;
	}
}

json outcome_json(const SolveOutcome& out, const TaskSet& ts)
{
	json j{{"status", to_string(out.status)}, {"nodes", out.stats.nodes}, {"elapsed_ms", out.stats.elapsed_ms}};
	if (out.objective_value)
		j["objective"] = *out.objective_value;
	if (!out.message.empty())
		j["message"] = out.message;
	if (out.blocking_task)
		j["blocking_task"] = *out.blocking_task;
	if (out.blocking_subperiod)
		j["blocking_subperiod"] = *out.blocking_subperiod;
	if (out.schedule && out.status == Status::Feasible) {
		j["jitter"] = metrics::to_double(metrics::jitter(*out.schedule, ts));
		j["distribution"] = metrics::to_string(metrics::distribution(*out.schedule));
	}
	return j;
}

void emit(const json& j, const std::string& out_file)
{
	if (out_file.empty())
		std::cout << j.dump(2) << "\n";
	else
		io::write_json(out_file, j);
}

// Scalar fields may hold a list of values; the grid is their cartesian product.
std::vector<gen::GenParams> expand_grid(const json& sweep)
{
	std::vector<json> points{json::object()};
	for (const auto& [key, value] : sweep.items()) {
		const bool range_key = key == "jitter" || key == "age";
		const bool sweep = value.is_array() && (!range_key || (!value.empty() && value[0].is_array()));
		std::vector<json> next;
		for (const auto& p : points) {
			if (!sweep) {
				auto q = p;
				q[key] = value;
				next.push_back(q);
				continue;
			}
			for (const auto& v : value) {
				auto q = p;
				q[key] = v;
				next.push_back(q);
			}
		}
		points = std::move(next);
	}
	std::vector<gen::GenParams> grid;
	for (const auto& p : points)
		grid.push_back(gen::params_from_json(p));
	return grid;
}

std::vector<bench::Engine> parse_engines(const std::string& list)
{
	std::vector<bench::Engine> engines;
	std::stringstream ss(list);
	for (std::string name; std::getline(ss, name, ',');)
		if (!name.empty())
			engines.push_back(bench::parse_engine(name));
	return engines;
}

// Minimal reader for the rows CSV written by the bench command.
std::vector<std::map<std::string, std::string>> read_csv(const fs::path& path)
{
	std::ifstream in(path);
	if (!in)
		throw io::IoError("cannot read " + path.string());
	auto split = [](const std::string& line) {
		std::vector<std::string> cells;
		std::stringstream ss(line);
		for (std::string c; std::getline(ss, c, ',');)
			cells.push_back(c);
		if (!line.empty() && line.back() == ',')
			cells.emplace_back();
		return cells;
	};
	std::string line;
	std::getline(in, line);
	const auto header = split(line);
	std::vector<std::map<std::string, std::string>> rows;
	while (std::getline(in, line)) {
		if (line.empty() || line[0] == '#')
			continue;
		auto cells = split(line);
		std::map<std::string, std::string> row;
		for (std::size_t i = 0; i < header.size() && i < cells.size(); ++i)
			row[header[i]] = cells[i];
		rows.push_back(std::move(row));
	}
	return rows;
}

struct Common {
	unsigned jobs = 1;
	std::uint64_t seed = 0;
	double timeout = 60;
	std::string out;
};

int cmd_gen(const std::string& params_file, int count, bool pairs, const Common& c, bool write_tasksets)
{
	const auto grid = expand_grid(io::read_json(params_file));
	const auto manifest = gen::make_manifest(grid, count, pairs, c.seed, pairs ? "pair" : "ts");
	const fs::path dir = c.out.empty() ? fs::path("corpus") : fs::path(c.out);
	fs::create_directories(dir);
	gen::save_manifest(dir / "manifest.json", manifest);
	if (write_tasksets) {
		auto corpus = bench::materialize(manifest, c.jobs);
		fs::create_directories(dir / "tasksets");
		for (const auto& item : corpus.tasksets)
			io::save_taskset(dir / "tasksets" / (item.id + ".json"), item.taskset);
		for (const auto& p : corpus.pairs) {
			io::save_taskset(dir / "tasksets" / (p.id + "-a.json"), p.first);
			io::save_taskset(dir / "tasksets" / (p.id + "-b.json"), p.second);
		}
	}
	std::cout << manifest.entries.size() << " entries over " << grid.size() << " parameter points written to "
	          << (dir / "manifest.json").string() << "\n";
	return Ok;
}

int cmd_exact(const std::string& taskset, const std::string& objective, const std::string& lp_file,
              const std::string& schedule_out, const Common& c)
{
	auto ts = io::load_taskset(taskset);
	exact::SolveOptions opt;
	if (objective == "jitter")
		opt.objective = exact::Objective::MinimizeSlotChanges;
	else if (objective != "none")
		throw CLI::ValidationError("--objective", "expected none or jitter");
	opt.time_budget_s = c.timeout;
	opt.seed = c.seed;
	if (!lp_file.empty()) {
		auto summary = lp::export_model(lp_file, ts, {opt.objective});
		std::cerr << "model with " << summary.total_rows() << " rows written to " << lp_file << "\n";
	}
	auto out = exact::solve(ts, opt);
	if (out.schedule && !schedule_out.empty())
		io::save_schedule(schedule_out, *out.schedule);
	emit(outcome_json(out, ts), c.out);
	return exit_for(out.status);
}

int cmd_heur(const std::string& taskset, const std::string& mode, const std::string& schedule_out, const Common& c)
{
	auto ts = io::load_taskset(taskset);
	heur::HeuristicStats stats;
	auto out = heur::schedule(ts, heur::SchedulerMode::parse(mode), &stats);
	if (out.schedule && !schedule_out.empty())
		io::save_schedule(schedule_out, *out.schedule);
	auto j = outcome_json(out, ts);
	j["reused"] = stats.reused;
	emit(j, c.out);
	return exit_for(out.status);
}

int cmd_merge(const std::string& a, const std::string& b, const std::string& sa, const std::string& sb,
              const std::string& mode, const std::string& merged_out, const std::string& schedule_out, const Common& c)
{
	auto ta = io::load_taskset(a);
	auto tb = io::load_taskset(b);
	const bool use_exact = mode == "exact";
	auto source = [&](const TaskSet& ts, const std::string& file) -> std::optional<Schedule> {
		if (!file.empty())
			return io::load_schedule(file);
		auto out = use_exact ? exact::solve(ts, {exact::Objective::None, c.timeout})
		                     : heur::schedule(ts, heur::SchedulerMode::parse(mode));
		if (out.status != Status::Feasible)
			return std::nullopt;
		return out.schedule;
	};
	auto s1 = source(ta, sa);
	auto s2 = source(tb, sb);
	if (!s1 || !s2) {
		emit(json{{"status", "Unschedulable"}, {"message", "a source taskset could not be scheduled"}}, c.out);
		return Negative;
	}
	auto merge = exact::merge_schedules(*s1, *s2, ta, tb);
	auto out = use_exact ? exact::solve_adaptation(merge, {exact::Objective::MaximizeStability, c.timeout})
	                     : heur::adapt(merge, heur::SchedulerMode::parse(mode));
	auto j = outcome_json(out, merge.taskset);
	if (out.status == Status::Feasible)
		j["stability"] = metrics::stability(merge.combined, *out.schedule);
	if (!merged_out.empty())
		io::save_taskset(merged_out, merge.taskset);
	if (out.schedule && !schedule_out.empty())
		io::save_schedule(schedule_out, *out.schedule);
	emit(j, c.out);
	return exit_for(out.status);
}

int cmd_validate(const std::string& taskset, const std::string& schedule, const std::string& previous, const Common& c)
{
	auto ts = io::load_taskset(taskset);
	auto s = io::load_schedule(schedule);
	auto report = validate(s, ts);
	if (!previous.empty()) {
		auto t = validate_transition(io::load_schedule(previous), s, ts);
		report.violations.insert(report.violations.end(), t.violations.begin(), t.violations.end());
	}
	emit(io::to_json(report), c.out);
	return report.overall() ? Ok : Negative;
}

int cmd_bench(const std::string& manifest, const std::string& engines, const std::string& source,
              const std::string& merge_engine, const Common& c)
{
	bench::ExperimentPlan plan;
	plan.manifest = manifest;
	plan.engines = parse_engines(engines);
	plan.timeout_s = c.timeout;
	plan.out_dir = c.out.empty() ? fs::path("bench-out") : fs::path(c.out);
	plan.workers = c.jobs;
	plan.check();

	auto corpus = bench::load_corpus(plan.manifest, plan.workers);
	fs::create_directories(plan.out_dir);
	fs::copy_file(plan.manifest, plan.out_dir / "manifest.json", fs::copy_options::overwrite_existing);
	json run{{"engines", engines},        {"timeout_s", plan.timeout_s}, {"workers", plan.workers},
	         {"hypothesis_source", source}, {"hypothesis_merge", merge_engine}};
	io::write_json(plan.out_dir / "run.json", run);

	if (!corpus.tasksets.empty()) {
		auto result = bench::run_schedulability(corpus.tasksets, plan);
		bench::write_rows_csv(plan.out_dir / "rows.csv", result.rows);
		bench::write_aggregate_csv(plan.out_dir / "schedulability.csv", result.aggregate);
		for (auto engine : plan.engines) {
			std::vector<bench::ExperimentRow> mine;
			std::map<int, std::vector<Schedule>> by_h;
			for (const auto& r : result.rows)
				if (r.engine == engine) {
					mine.push_back(r);
					if (r.schedule)
						by_h[r.schedule->hyperperiod()].push_back(*r.schedule);
				}
			const std::string name = bench::to_string(engine);
			bench::emit_cdf(bench::field_values(mine, "solve_ms"), plan.out_dir / ("solve_ms-" + name),
			                name + " solve time [ms]");
			for (const auto& [H, schedules] : by_h)
				bench::write_histogram_csv(plan.out_dir / ("slots-" + name + "-H" + std::to_string(H) + ".csv"),
				                           metrics::slot_histogram(schedules));
		}
		for (const auto& a : result.aggregate)
			if (a.parameter == "hyperperiod")
				std::cout << "H=" << a.value << " " << bench::to_string(a.engine) << ": " << a.scheduled << "/"
				          << a.decided << " scheduled, " << a.timeouts << " timeouts\n";
	}
	if (!corpus.pairs.empty()) {
		bench::HypothesisOptions h;
		h.sources = parse_engines(source);
		h.merge = bench::parse_engine(merge_engine);
		h.timeout_s = plan.timeout_s;
		h.workers = plan.workers;
		auto hyp = bench::run_hypothesis(corpus.pairs, h);
		bench::write_hypothesis_csv(plan.out_dir / "hypothesis.csv", hyp);
		std::cout << "hypothesis: " << hyp.rows.size() << " pairs, spearman "
		          << (hyp.spearman ? std::to_string(*hyp.spearman) : "n/a") << "\n";

		auto merge = bench::run_merge_benchmark(corpus.pairs, plan);
		bench::write_merge_csv(plan.out_dir / "merge.csv", merge);
		for (const auto& s : merge.summary)
			std::cout << "merge " << bench::to_string(s.engine) << ": " << s.merged << "/" << s.attempted << "\n";
	}
	return Ok;
}

int cmd_cdf(const std::string& rows_file, const std::string& field, const std::string& engine, const Common& c)
{
	std::vector<double> values;
	for (const auto& row : read_csv(rows_file)) {
		if (!engine.empty() && row.at("engine") != engine)
			continue;
		auto it = row.find(field);
		if (it == row.end())
			throw CLI::ValidationError("--field", "no column '" + field + "'");
		if (!it->second.empty())
			values.push_back(std::stod(it->second));
	}
	const fs::path stem = c.out.empty() ? fs::path("cdf-" + field) : fs::path(c.out);
	auto points = bench::emit_cdf(values, stem, engine.empty() ? field : engine + " " + field);
	std::cout << points.size() << " points, max " << points.back().value << "\n";
	return Ok;
}

}

int main(int argc, char** argv)
{
	CLI::App app{"time-slot and channel scheduling for task clusters"};
	app.require_subcommand(1);
	Common common;
	auto add_common = [&](CLI::App* sub) {
		sub->add_option("--jobs", common.jobs, "worker threads")->check(CLI::PositiveNumber);
		sub->add_option("--seed", common.seed, "base seed");
		sub->add_option("--timeout", common.timeout, "per-instance time budget [s]")->check(CLI::PositiveNumber);
		sub->add_option("--out", common.out, "output file or directory");
	};

	std::string params, taskset, objective = "none", lp_file, schedule_out, mode = "11", a, b, sa, sb, merged_out,
	                             schedule, previous, manifest, engines = "exact-none,exact-jitter,heur-00,heur-01,heur-10,heur-11",
	                             source = "exact-none", merge_engine = "exact-none", rows, field = "solve_ms", engine;
	int count = 10;
	bool pairs = false, write_tasksets = false;

	auto gen = app.add_subcommand("gen", "write a corpus manifest");
	gen->add_option("--params", params, "JSON parameters; list values are swept")->required()->check(CLI::ExistingFile);
	gen->add_option("--count", count, "entries per parameter point");
	gen->add_flag("--pairs", pairs, "generate same-shape pairs");
	gen->add_flag("--tasksets", write_tasksets, "also write every taskset file");
	add_common(gen);

	auto ex = app.add_subcommand("exact", "solve a taskset exactly");
	ex->add_option("--taskset", taskset)->required()->check(CLI::ExistingFile);
	ex->add_option("--objective", objective, "none or jitter")->check(CLI::IsMember({"none", "jitter"}));
	ex->add_option("--export-lp", lp_file, "write the CPLEX-LP model");
	ex->add_option("--schedule", schedule_out, "write the schedule");
	add_common(ex);

	auto he = app.add_subcommand("heur", "schedule a taskset heuristically");
	he->add_option("--taskset", taskset)->required()->check(CLI::ExistingFile);
	he->add_option("--mode", mode, "shifting digit then ordering digit")->check(CLI::IsMember({"00", "01", "10", "11"}));
	he->add_option("--schedule", schedule_out, "write the schedule");
	add_common(he);

	auto me = app.add_subcommand("merge", "merge two tasksets and reschedule");
	me->add_option("--a", a)->required()->check(CLI::ExistingFile);
	me->add_option("--b", b)->required()->check(CLI::ExistingFile);
	me->add_option("--schedule-a", sa, "existing schedule of a")->check(CLI::ExistingFile);
	me->add_option("--schedule-b", sb, "existing schedule of b")->check(CLI::ExistingFile);
	me->add_option("--mode", mode, "exact or a heuristic mode")->check(CLI::IsMember({"exact", "00", "01", "10", "11"}));
	me->add_option("--merged", merged_out, "write the merged taskset");
	me->add_option("--schedule", schedule_out, "write the merged schedule");
	add_common(me);

	auto va = app.add_subcommand("validate", "check a schedule; exit 0 iff valid");
	va->add_option("--taskset", taskset)->required()->check(CLI::ExistingFile);
	va->add_option("--schedule", schedule)->required()->check(CLI::ExistingFile);
	va->add_option("--previous", previous, "schedule switched from, same ids")->check(CLI::ExistingFile);
	add_common(va);

	auto be = app.add_subcommand("bench", "run the experiments of a corpus");
	be->add_option("--manifest", manifest)->required();
	be->add_option("--engines", engines, "comma separated engine list");
	be->add_option("--hypothesis-source", source, "comma separated engines scheduling the pair members, used in turn");
	be->add_option("--hypothesis-merge", merge_engine, "engine merging the pairs");
	add_common(be);

	auto cd = app.add_subcommand("cdf", "empirical CDF of a rows CSV column");
	cd->add_option("--rows", rows)->required()->check(CLI::ExistingFile);
	cd->add_option("--field", field, "column");
	cd->add_option("--engine", engine, "restrict to one engine");
	add_common(cd);

	CLI11_PARSE(app, argc, argv);
	try {
		if (*gen)
			return cmd_gen(params, count, pairs, common, write_tasksets);
		if (*ex)
			return cmd_exact(taskset, objective, lp_file, schedule_out, common);
		if (*he)
			return cmd_heur(taskset, mode, schedule_out, common);
		if (*me)
			return cmd_merge(a, b, sa, sb, mode, merged_out, schedule_out, common);
		if (*va)
			return cmd_validate(taskset, schedule, previous, common);
		if (*be)
			return cmd_bench(manifest, engines, source, merge_engine, common);
		if (*cd)
			return cmd_cdf(rows, field, engine, common);
	} catch (const CLI::Error& e) {
		return app.exit(e);
	} catch (const std::exception& e) {
		std::cerr << "tc-sched: " << e.what() << "\n";
		return Failure;
	}
	return Failure;
}
