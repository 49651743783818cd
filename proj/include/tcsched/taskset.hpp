#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace tcs {

using TaskId = int;
using NodeId = int;

struct TaskSpec {
	TaskId id = 0;
	NodeId node = 0;
	int max_jitter = 0;   // time-slots
};

// `from` is the dependency (parent), `to` the dependent task (child).
struct DependencyEdge {
	TaskId from = 0;
	TaskId to = 0;
	int max_age = 1;      // time-slots
};

struct JobSpec {
	int id = 0;
	int period = 1;
	TaskId leaf = 0;
	std::vector<TaskId> members;
};

// Raw, unchecked problem description as read from a taskset file.
struct TaskSetDescription {
	int channels = 1;
	std::vector<NodeId> nodes;
	std::vector<TaskSpec> tasks;
	std::vector<DependencyEdge> edges;
	std::vector<JobSpec> jobs;
	std::optional<int> hyperperiod;
};

enum class ModelErrorKind {
	CyclicDependency,
	MultipleLeaves,
	DanglingReference,
	NonDividingPeriod,
	OpenJob,
	InvalidValue,
};

const char* to_string(ModelErrorKind kind);

class ModelError : public std::runtime_error {
public:
	ModelError(ModelErrorKind kind, const std::string& what)
	: std::runtime_error(what), kind_(kind)
	{
	}

	ModelErrorKind kind() const { return kind_; }

private:
	ModelErrorKind kind_;
};

// Adjacency entry: the neighbouring task (by index) and the max age of the edge.
struct Arc {
	std::size_t task;
	int max_age;
};

struct JobInfo {
	JobSpec spec;
	std::size_t leaf = 0;                  // task index
	std::vector<std::size_t> members;      // task indices, ascending
	std::vector<std::size_t> entries;      // members without parents inside the job
	// Longest hop distance from each member to the leaf; -1 for non-members.
	std::vector<int> distance;
	int longest_path = 0;                  // edges from the farthest entry to the leaf

	bool contains(std::size_t task) const { return distance[task] >= 0; }
};

// Immutable problem instance. Tasks are addressed by index (ascending id
// order) internally; ids only appear at the I/O boundary.
class TaskSet {
public:
	TaskSet() = default;

	// Validates the description and derives periods, hyperperiod, entry and
	// leaf sets and per-job distances. Throws ModelError.
	static TaskSet build(TaskSetDescription description);

	std::size_t size() const { return tasks_.size(); }
	bool empty() const { return tasks_.empty(); }
	int channels() const { return channels_; }
	int hyperperiod() const { return hyperperiod_; }

	const TaskSpec& task(std::size_t i) const { return tasks_[i]; }
	TaskId id(std::size_t i) const { return tasks_[i].id; }
	int period(std::size_t i) const { return periods_[i]; }
	int jitter(std::size_t i) const { return tasks_[i].max_jitter; }
	int executions_per_hyperperiod(std::size_t i) const { return hyperperiod_ / periods_[i]; }

	std::optional<std::size_t> find(TaskId id) const;
	std::size_t index_of(TaskId id) const;

	std::span<const Arc> parents(std::size_t i) const { return parents_[i]; }
	std::span<const Arc> children(std::size_t i) const { return children_[i]; }
	std::optional<int> max_age(std::size_t from, std::size_t to) const;

	bool intersects(std::size_t a, std::size_t b) const { return intersect_[a * tasks_.size() + b] != 0; }

	const std::vector<JobInfo>& jobs() const { return jobs_; }
	std::span<const std::size_t> jobs_of(std::size_t task) const { return jobs_of_[task]; }
	const std::vector<std::size_t>& entries() const { return entries_; }
	const std::vector<std::size_t>& leaves() const { return leaves_; }
	// Parents before children; ties by index.
	const std::vector<std::size_t>& topological_order() const { return topo_; }

	const TaskSetDescription& description() const { return desc_; }

private:
	TaskSetDescription desc_;
	std::vector<TaskSpec> tasks_;
	std::vector<int> periods_;
	std::vector<std::vector<Arc>> parents_;
	std::vector<std::vector<Arc>> children_;
	std::vector<char> intersect_;
	std::vector<JobInfo> jobs_;
	std::vector<std::vector<std::size_t>> jobs_of_;
	std::vector<std::size_t> entries_;
	std::vector<std::size_t> leaves_;
	std::vector<std::size_t> topo_;
	int channels_ = 1;
	int hyperperiod_ = 0;
};

// lcm of all job periods. Throws ModelError if there are no jobs.
int hyperperiod(const TaskSet& ts);
int hyperperiod(std::span<const int> periods);

class IntersectionMatrix {
public:
	IntersectionMatrix() = default;
	explicit IntersectionMatrix(std::vector<TaskId> ids);

	std::size_t size() const { return ids_.size(); }
	bool operator()(std::size_t a, std::size_t b) const { return cells_[a * ids_.size() + b] != 0; }
	bool between(TaskId a, TaskId b) const;
	void set(std::size_t a, std::size_t b, bool value);

private:
	std::vector<TaskId> ids_;
	std::vector<char> cells_;
};

// Tasks U and T intersect iff they share a node, are joined by an edge,
// share a parent or share a child. The diagonal is set.
IntersectionMatrix intersection_matrix(const TaskSet& ts);

// Tasks on the paths from one entry to the leaf of a job, split by whether
// their period equals the job period or is shorter.
struct PathSet {
	int job = 0;
	std::size_t entry = 0;
	std::size_t leaf = 0;
	std::vector<std::size_t> same_period;      // ascending task index
	std::vector<std::size_t> shorter_period;   // ascending task index
};

std::vector<PathSet> path_sets(const TaskSet& ts);

}
