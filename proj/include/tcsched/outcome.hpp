#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "tcsched/schedule.hpp"

namespace tcs {

enum class Status { Feasible, Infeasible, TimedOut, Unschedulable };

const char* to_string(Status s);

struct SolveStats {
	std::uint64_t nodes = 0;
	double elapsed_ms = 0;
	bool optimal = false;     // objective proven optimal (exact engine only)
};

// `schedule` holds the solution when Feasible. A TimedOut outcome may carry
// the best incumbent found before the budget ran out.
struct SolveOutcome {
	Status status = Status::Infeasible;
	std::optional<Schedule> schedule;
	std::optional<double> objective_value;
	SolveStats stats;
	std::string message;
	// Set by the heuristic when it reports Unschedulable.
	std::optional<TaskId> blocking_task;
	std::optional<int> blocking_subperiod;
};

}
