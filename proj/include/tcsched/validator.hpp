#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "tcsched/schedule.hpp"
#include "tcsched/taskset.hpp"

namespace tcs {

enum class ValidationErrorKind { DimensionMismatch, UnknownTask, TaskMissing };

class ValidationError : public std::runtime_error {
public:
	ValidationError(ValidationErrorKind kind, const std::string& what)
	: std::runtime_error(what), kind_(kind)
	{
	}
	ValidationErrorKind kind() const { return kind_; }

private:
	ValidationErrorKind kind_;
};

// Constraint ids:
//  1 slot shared by two tasks          5 common dependency execution differs inside a job
//  2 intersecting tasks share a time-slot   6 not exactly once per own period window
//  3 dependency missing before dependent    7 jitter bound exceeded
//  4 dependency older than its max age      8 schedule switch exceeds the jitter bound
struct Violation {
	int constraint = 0;
	std::vector<TaskId> tasks;
	std::vector<int> slots;
	std::string message;
};

struct ValidationReport {
	std::vector<Violation> violations;

	bool overall() const { return violations.empty(); }
	bool violates(int constraint) const;
	std::string summary() const;
};

ValidationReport validate(const Schedule& schedule, const TaskSet& ts);

// Checks the schedule switch old -> next. Both schedules use the ids of
// `merged`; `next` must have merged's dimensions.
ValidationReport validate_transition(const Schedule& old, const Schedule& next, const TaskSet& merged);

namespace check {

// Channel-collapsed execution times per task index, ascending.
using ExecutionTimes = std::vector<std::vector<int>>;

ExecutionTimes execution_times(const Schedule& schedule, const TaskSet& ts);

// Latest execution strictly before `time`, or 0.
int latest_before(const std::vector<int>& times, int time);

// Every instance of the job (one per leaf execution) traces its dependencies
// back through nearest preceding executions; a member reached through two
// different executions breaks the instance. Appends violations to `out` when
// given and returns whether the job is consistent.
bool path_consistent(const TaskSet& ts, std::size_t job, const ExecutionTimes& times,
                     std::vector<Violation>* out = nullptr);

// Jitter rule on one task's execution times in a hyperperiod of length H.
bool jitter_ok(const std::vector<int>& times, int period, int jitter, int hyperperiod,
               std::vector<Violation>* out = nullptr, TaskId id = 0);

}

}
