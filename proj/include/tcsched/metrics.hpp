#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <boost/rational.hpp>

#include "tcsched/schedule.hpp"
#include "tcsched/taskset.hpp"

namespace tcs::metrics {

using Rational = boost::rational<std::int64_t>;

double to_double(const Rational& r);
std::string to_string(const Rational& r);

// Mean over tasks of sum_i ((e_i - e_1) mod P) / n. Zero for an empty taskset.
Rational jitter(const Schedule& schedule, const TaskSet& ts);

// Used->unused time-slot transitions per scheduled execution. Slot 0 counts
// as unused and the hyperperiod does not wrap. Zero without executions.
Rational distribution(const Schedule& schedule);

// Allocations (task, time-slot) present in both schedules, channels ignored.
long long stability(const Schedule& before, const Schedule& after);

struct SlotHistogram {
	std::vector<double> probability;   // index t-1
	double reference = 0;              // mean used fraction: the uniform-allocation level
};

SlotHistogram slot_histogram(std::span<const Schedule> corpus);

}
