#include "support.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace tcs::test {

TaskSet make_taskset(int channels, std::vector<TaskSpec> tasks, std::vector<DependencyEdge> edges,
                     std::vector<JobSpec> jobs)
{
	TaskSetDescription d;
	d.channels = channels;
	std::set<NodeId> nodes;
	for (const auto& t : tasks)
		nodes.insert(t.node);
	d.nodes.assign(nodes.begin(), nodes.end());
	d.tasks = std::move(tasks);
	d.edges = std::move(edges);
	d.jobs = std::move(jobs);
	return TaskSet::build(std::move(d));
}

TaskSet example_graph(int period0, int period1, int channels, int jitter, int age)
{
	std::vector<TaskSpec> tasks = {
		{0, 0, jitter}, {1, 1, jitter}, {2, 1, jitter}, {3, 2, jitter}, {4, 3, jitter}, {5, 4, jitter},
	};
	std::vector<DependencyEdge> edges = {
		{5, 0, age}, {5, 3, age}, {5, 4, age}, {4, 1, age}, {4, 2, age}, {3, 0, age}, {2, 0, age},
	};
	std::vector<JobSpec> jobs = {
		{0, period0, 0, {0, 2, 3, 4, 5}},
		{1, period1, 1, {1, 4, 5}},
	};
	return make_taskset(channels, tasks, edges, jobs);
}

Schedule from_times(int hyperperiod, int channels, const std::map<TaskId, std::vector<int>>& times)
{
	Schedule s(hyperperiod, channels);
	for (const auto& [id, ts] : times)
		for (int t : ts) {
			int c = 1;
			while (c <= channels && !s.cell_free({t, c}))
				++c;
			s.place(id, {t, std::min(c, channels)});
		}
	return s;
}

TaskSet random_small(std::mt19937_64& rng, int max_tasks, int max_h, int max_m)
{
	auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
	const int n = pick(1, max_tasks);
	const int H = pick(1, max_h);
	std::vector<int> divisors;
	for (int p = 1; p <= H; ++p)
		if (H % p == 0)
			divisors.push_back(p);

	std::vector<TaskSpec> tasks;
	const int nodes = pick(1, n + 1);
	for (int i = 0; i < n; ++i)
		tasks.push_back({i, pick(0, nodes - 1), pick(0, 2)});
	std::vector<DependencyEdge> edges;
	std::vector<std::vector<int>> parents(n);
	for (int a = 0; a < n; ++a)
		for (int b = a + 1; b < n; ++b)
			if (pick(0, 99) < 35) {
				edges.push_back({a, b, pick(1, H)});
				parents[b].push_back(a);
			}
	auto ancestors = [&](int leaf) {
		std::vector<char> in(n, 0);
		in[leaf] = 1;
		for (int i = n - 1; i >= 0; --i)
			if (in[i])
				for (int p : parents[i])
					in[p] = 1;
		std::vector<TaskId> m;
		for (int i = 0; i < n; ++i)
			if (in[i])
				m.push_back(i);
		return m;
	};
	std::vector<char> has_child(n, 0);
	for (const auto& e : edges)
		has_child[e.from] = 1;
	std::vector<JobSpec> jobs;
	for (int i = 0; i < n; ++i)
		if (!has_child[i] || pick(0, 99) < 15)
			jobs.push_back({static_cast<int>(jobs.size()), divisors[pick(0, static_cast<int>(divisors.size()) - 1)], i,
			                ancestors(i)});
	jobs[pick(0, static_cast<int>(jobs.size()) - 1)].period = H;
	return make_taskset(pick(1, max_m), tasks, edges, jobs);
}

}
