#pragma once

#include <map>
#include <random>
#include <vector>

#include "tcsched/schedule.hpp"
#include "tcsched/taskset.hpp"

namespace tcs::test {

TaskSet make_taskset(int channels, std::vector<TaskSpec> tasks, std::vector<DependencyEdge> edges,
                     std::vector<JobSpec> jobs);

// The two-job example graph: job 0 = {5,4,3,2,0} ending in 0, job 1 = {5,4,1}
// ending in 1. Tasks 1 and 2 share a node.
TaskSet example_graph(int period0 = 10, int period1 = 5, int channels = 3, int jitter = 1, int age = 10);

// Places every listed execution on the lowest free channel of its time-slot.
Schedule from_times(int hyperperiod, int channels, const std::map<TaskId, std::vector<int>>& times);

// Random instance with at most `max_tasks` tasks, H <= max_h and M <= max_m.
TaskSet random_small(std::mt19937_64& rng, int max_tasks, int max_h, int max_m);

}
