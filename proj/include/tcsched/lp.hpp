#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>

#include "tcsched/exact.hpp"
#include "tcsched/schedule.hpp"
#include "tcsched/taskset.hpp"

// CPLEX-LP export of the binary allocation model and import of solver output.
namespace tcs::lp {

struct ExportOptions {
	exact::Objective objective = exact::Objective::None;
	// Combined schedule of a merge. Adds the rows keeping every allocation
	// within its jitter of the combined slot; required for MaximizeStability.
	const Schedule* combined = nullptr;
};

struct ModelSummary {
	std::map<std::string, long long> rows;   // family -> count
	long long binaries = 0;
	long long integers = 0;
	long long continuous = 0;

	long long total_rows() const;
};

// a_<task>_<channel>_<slot>
std::string allocation_name(TaskId task, int channel, int time);

// Writes the model. Row families:
//   c1   one task per cell                     (channel, slot)
//   c2   intersecting tasks apart              (pair, slot)
//   c3   dependency executed within age/window (task, dependency, slot)
//   c4   one execution per own period          (task, period)
//   c5   execution one period earlier +-J      (task, slot)
//   c5p  cyclic period deviation               (task, period, side), more than one period
//   c5g  consecutive period difference         (task, period, side), more than one period
//   c8   used execution is the latest before the consumer
//   c10  one used execution per member and leaf execution
//   c11  used executions are real executions
//   c12  allocation within jitter of the combined schedule
//   o1   split of |a(t) - a(t+P)| for the slot change objective
// Path rows (c8, c10, c11) are only written for jobs mixing periods.
ModelSummary write_model(std::ostream& out, const TaskSet& ts, const ExportOptions& options = {});
ModelSummary export_model(const std::filesystem::path& path, const TaskSet& ts, const ExportOptions& options = {});

// Reads `name value` lines; allocation variables above 0.5 become
// executions. Other lines are ignored.
Schedule read_solution(std::istream& in, const TaskSet& ts);
Schedule import_solution(const std::filesystem::path& path, const TaskSet& ts);

}
