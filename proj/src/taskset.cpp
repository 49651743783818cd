#include "tcsched/taskset.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <unordered_map>

namespace tcs {

const char* to_string(ModelErrorKind kind)
{
	switch (kind) {
	case ModelErrorKind::CyclicDependency: return "CyclicDependency";
	case ModelErrorKind::MultipleLeaves: return "MultipleLeaves";
	case ModelErrorKind::DanglingReference: return "DanglingReference";
	case ModelErrorKind::NonDividingPeriod: return "NonDividingPeriod";
	case ModelErrorKind::OpenJob: return "OpenJob";
	case ModelErrorKind::InvalidValue: return "InvalidValue";
	}
	return "?";
}

namespace {

[[noreturn]] void fail(ModelErrorKind kind, const std::string& msg)
{
	throw ModelError(kind, std::string(to_string(kind)) + ": " + msg);
}

}

int hyperperiod(std::span<const int> periods)
{
	if (periods.empty())
		throw ModelError(ModelErrorKind::InvalidValue, "hyperperiod of an empty job set");
	long long h = 1;
	for (int p : periods) {
		h = std::lcm(h, static_cast<long long>(p));
		if (h > (1LL << 30))
			fail(ModelErrorKind::InvalidValue, "hyperperiod overflow");
	}
	return static_cast<int>(h);
}

int hyperperiod(const TaskSet& ts)
{
	std::vector<int> periods;
	for (const auto& j : ts.jobs())
		periods.push_back(j.spec.period);
	return hyperperiod(periods);
}

TaskSet TaskSet::build(TaskSetDescription d)
{
	TaskSet ts;
	if (d.channels < 1)
		fail(ModelErrorKind::InvalidValue, "channel count must be positive");
	ts.channels_ = d.channels;

	std::sort(d.tasks.begin(), d.tasks.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
	std::sort(d.jobs.begin(), d.jobs.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
	std::sort(d.edges.begin(), d.edges.end(), [](const auto& a, const auto& b) {
		return std::pair(a.from, a.to) < std::pair(b.from, b.to);
	});
	std::sort(d.nodes.begin(), d.nodes.end());

	std::unordered_map<TaskId, std::size_t> index;
	for (std::size_t i = 0; i < d.tasks.size(); ++i) {
		const auto& t = d.tasks[i];
		if (t.id < 0)
			fail(ModelErrorKind::InvalidValue, "task id " + std::to_string(t.id) + " is negative");
		if (t.max_jitter < 0)
			fail(ModelErrorKind::InvalidValue, "task " + std::to_string(t.id) + " has negative jitter");
		if (!index.emplace(t.id, i).second)
			fail(ModelErrorKind::InvalidValue, "duplicate task id " + std::to_string(t.id));
		if (!d.nodes.empty() && !std::binary_search(d.nodes.begin(), d.nodes.end(), t.node))
			fail(ModelErrorKind::DanglingReference,
			     "task " + std::to_string(t.id) + " runs on unknown node " + std::to_string(t.node));
	}
	ts.tasks_ = d.tasks;
	const std::size_t n = d.tasks.size();
	auto lookup = [&](TaskId id, const std::string& where) {
		auto it = index.find(id);
		if (it == index.end())
			fail(ModelErrorKind::DanglingReference, where + " references unknown task " + std::to_string(id));
		return it->second;
	};

	ts.parents_.assign(n, {});
	ts.children_.assign(n, {});
	for (std::size_t e = 0; e < d.edges.size(); ++e) {
		const auto& edge = d.edges[e];
		auto from = lookup(edge.from, "edge");
		auto to = lookup(edge.to, "edge");
		if (from == to)
			fail(ModelErrorKind::CyclicDependency, "self dependency on task " + std::to_string(edge.from));
		if (edge.max_age < 1)
			fail(ModelErrorKind::InvalidValue, "edge max age must be positive");
		if (e > 0 && d.edges[e - 1].from == edge.from && d.edges[e - 1].to == edge.to)
			fail(ModelErrorKind::InvalidValue, "duplicate edge " + std::to_string(edge.from) + "->" + std::to_string(edge.to));
		ts.parents_[to].push_back({from, edge.max_age});
		ts.children_[from].push_back({to, edge.max_age});
	}

	// Kahn's algorithm, smallest index first for a canonical order.
	{
		std::vector<int> indeg(n);
		for (std::size_t i = 0; i < n; ++i)
			indeg[i] = static_cast<int>(ts.parents_[i].size());
		std::set<std::size_t> ready;
		for (std::size_t i = 0; i < n; ++i)
			if (indeg[i] == 0)
				ready.insert(i);
		while (!ready.empty()) {
			auto i = *ready.begin();
			ready.erase(ready.begin());
			ts.topo_.push_back(i);
			for (const auto& c : ts.children_[i])
				if (--indeg[c.task] == 0)
					ready.insert(c.task);
		}
		if (ts.topo_.size() != n)
			fail(ModelErrorKind::CyclicDependency, "dependency graph contains a cycle");
	}

	ts.jobs_of_.assign(n, {});
	std::set<int> job_ids;
	for (const auto& spec : d.jobs) {
		if (!job_ids.insert(spec.id).second)
			fail(ModelErrorKind::InvalidValue, "duplicate job id " + std::to_string(spec.id));
		if (spec.period < 1)
			fail(ModelErrorKind::InvalidValue, "job " + std::to_string(spec.id) + " has non-positive period");
		if (spec.members.empty())
			fail(ModelErrorKind::InvalidValue, "job " + std::to_string(spec.id) + " has no members");
		JobInfo job;
		job.spec = spec;
		std::sort(job.spec.members.begin(), job.spec.members.end());
		const std::string where = "job " + std::to_string(spec.id);
		std::vector<char> in_job(n, 0);
		for (auto id : job.spec.members) {
			auto i = lookup(id, where);
			if (in_job[i])
				fail(ModelErrorKind::InvalidValue, where + " lists task " + std::to_string(id) + " twice");
			in_job[i] = 1;
			job.members.push_back(i);
		}
		std::sort(job.members.begin(), job.members.end());
		auto declared_leaf = lookup(spec.leaf, where);
		if (!in_job[declared_leaf])
			fail(ModelErrorKind::DanglingReference, where + " leaf is not a member");

		std::vector<std::size_t> sinks;
		for (auto i : job.members) {
			bool has_child = std::any_of(ts.children_[i].begin(), ts.children_[i].end(),
			                             [&](const Arc& a) { return in_job[a.task]; });
			if (!has_child)
				sinks.push_back(i);
			bool has_parent = false;
			for (const auto& p : ts.parents_[i]) {
				if (!in_job[p.task])
					fail(ModelErrorKind::OpenJob, where + ": dependency " + std::to_string(ts.tasks_[p.task].id) +
					     " of member " + std::to_string(ts.tasks_[i].id) + " is not a member");
				has_parent = true;
			}
			if (!has_parent)
				job.entries.push_back(i);
		}
		if (sinks.size() != 1)
			fail(ModelErrorKind::MultipleLeaves, where + " has " + std::to_string(sinks.size()) + " leaf tasks");
		if (sinks.front() != declared_leaf)
			fail(ModelErrorKind::MultipleLeaves, where + ": declared leaf " + std::to_string(spec.leaf) +
			     " has dependents inside the job");
		job.leaf = declared_leaf;

		// Longest distance to the leaf, walking the topological order backwards.
		job.distance.assign(n, -1);
		job.distance[job.leaf] = 0;
		for (auto it = ts.topo_.rbegin(); it != ts.topo_.rend(); ++it) {
			auto i = *it;
			if (!in_job[i] || i == job.leaf)
				continue;
			int best = -1;
			for (const auto& c : ts.children_[i])
				if (in_job[c.task] && job.distance[c.task] >= 0)
					best = std::max(best, job.distance[c.task] + 1);
			if (best < 0)
				fail(ModelErrorKind::InvalidValue, where + ": member " + std::to_string(ts.tasks_[i].id) +
				     " does not reach the leaf");
			job.distance[i] = best;
		}
		for (auto i : job.members)
			job.longest_path = std::max(job.longest_path, job.distance[i]);
		for (auto i : job.members)
			ts.jobs_of_[i].push_back(ts.jobs_.size());
		ts.jobs_.push_back(std::move(job));
	}

	std::vector<int> periods;
	for (const auto& j : ts.jobs_)
		periods.push_back(j.spec.period);
	if (!periods.empty())
		ts.hyperperiod_ = tcs::hyperperiod(std::span<const int>(periods));
	if (d.hyperperiod) {
		if (*d.hyperperiod < 1)
			fail(ModelErrorKind::InvalidValue, "hyperperiod must be positive");
		for (int p : periods)
			if (*d.hyperperiod % p != 0)
				fail(ModelErrorKind::NonDividingPeriod,
				     "period " + std::to_string(p) + " does not divide hyperperiod " + std::to_string(*d.hyperperiod));
		if (!periods.empty() && *d.hyperperiod != ts.hyperperiod_)
			fail(ModelErrorKind::InvalidValue, "hyperperiod " + std::to_string(*d.hyperperiod) +
			     " is not the lcm of the job periods (" + std::to_string(ts.hyperperiod_) + ")");
		ts.hyperperiod_ = *d.hyperperiod;
	}

	ts.periods_.assign(n, 0);
	for (std::size_t i = 0; i < n; ++i) {
		if (ts.jobs_of_[i].empty())
			fail(ModelErrorKind::InvalidValue, "task " + std::to_string(ts.tasks_[i].id) + " belongs to no job");
		int p = ts.jobs_[ts.jobs_of_[i].front()].spec.period;
		for (auto j : ts.jobs_of_[i])
			p = std::min(p, ts.jobs_[j].spec.period);
		ts.periods_[i] = p;
	}

	std::set<std::size_t> entries, leaves;
	for (const auto& j : ts.jobs_) {
		entries.insert(j.entries.begin(), j.entries.end());
		leaves.insert(j.leaf);
	}
	ts.entries_.assign(entries.begin(), entries.end());
	ts.leaves_.assign(leaves.begin(), leaves.end());

	ts.intersect_.assign(n * n, 0);
	auto mark = [&](std::size_t a, std::size_t b) {
		ts.intersect_[a * n + b] = 1;
		ts.intersect_[b * n + a] = 1;
	};
	for (std::size_t a = 0; a < n; ++a) {
		mark(a, a);
		for (std::size_t b = a + 1; b < n; ++b)
			if (ts.tasks_[a].node == ts.tasks_[b].node)
				mark(a, b);
		for (const auto& c : ts.children_[a])
			mark(a, c.task);
		for (std::size_t x = 0; x < ts.children_[a].size(); ++x)
			for (std::size_t y = x + 1; y < ts.children_[a].size(); ++y)
				mark(ts.children_[a][x].task, ts.children_[a][y].task);
		for (std::size_t x = 0; x < ts.parents_[a].size(); ++x)
			for (std::size_t y = x + 1; y < ts.parents_[a].size(); ++y)
				mark(ts.parents_[a][x].task, ts.parents_[a][y].task);
	}

	ts.desc_ = std::move(d);
	return ts;
}

std::optional<std::size_t> TaskSet::find(TaskId id) const
{
	auto it = std::lower_bound(tasks_.begin(), tasks_.end(), id, [](const TaskSpec& t, TaskId v) { return t.id < v; });
	if (it == tasks_.end() || it->id != id)
		return std::nullopt;
	return static_cast<std::size_t>(it - tasks_.begin());
}

std::size_t TaskSet::index_of(TaskId id) const
{
	auto i = find(id);
	if (!i)
		throw ModelError(ModelErrorKind::DanglingReference, "unknown task " + std::to_string(id));
	return *i;
}

std::optional<int> TaskSet::max_age(std::size_t from, std::size_t to) const
{
	for (const auto& a : children_[from])
		if (a.task == to)
			return a.max_age;
	return std::nullopt;
}

IntersectionMatrix::IntersectionMatrix(std::vector<TaskId> ids)
: ids_(std::move(ids)), cells_(ids_.size() * ids_.size(), 0)
{
}

void IntersectionMatrix::set(std::size_t a, std::size_t b, bool value)
{
	cells_[a * ids_.size() + b] = value;
	cells_[b * ids_.size() + a] = value;
}

bool IntersectionMatrix::between(TaskId a, TaskId b) const
{
	auto ia = std::find(ids_.begin(), ids_.end(), a);
	auto ib = std::find(ids_.begin(), ids_.end(), b);
	if (ia == ids_.end() || ib == ids_.end())
		throw ModelError(ModelErrorKind::DanglingReference, "unknown task in intersection lookup");
	return (*this)(ia - ids_.begin(), ib - ids_.begin());
}

IntersectionMatrix intersection_matrix(const TaskSet& ts)
{
	std::vector<TaskId> ids;
	for (std::size_t i = 0; i < ts.size(); ++i)
		ids.push_back(ts.id(i));
	IntersectionMatrix m(std::move(ids));
	for (std::size_t a = 0; a < ts.size(); ++a)
		for (std::size_t b = a; b < ts.size(); ++b)
			m.set(a, b, ts.intersects(a, b));
	return m;
}

std::vector<PathSet> path_sets(const TaskSet& ts)
{
	std::vector<PathSet> out;
	const std::size_t n = ts.size();
	for (const auto& job : ts.jobs()) {
		for (auto entry : job.entries) {
			// descendants of the entry inside the job (every member reaches the leaf)
			std::vector<char> reach(n, 0);
			reach[entry] = 1;
			for (auto i : ts.topological_order()) {
				if (!reach[i])
					continue;
				for (const auto& c : ts.children(i))
					if (job.contains(c.task))
						reach[c.task] = 1;
			}
			PathSet ps;
			ps.job = job.spec.id;
			ps.entry = entry;
			ps.leaf = job.leaf;
			for (std::size_t i = 0; i < n; ++i) {
				if (!reach[i])
					continue;
				if (ts.period(i) == job.spec.period)
					ps.same_period.push_back(i);
				else
					ps.shorter_period.push_back(i);
			}
			out.push_back(std::move(ps));
		}
	}
	return out;
}

}
