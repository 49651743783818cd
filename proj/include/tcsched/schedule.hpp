#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "tcsched/taskset.hpp"

namespace tcs {

// Time-slots and channels are 1-based, as in 1..H and 1..M.
struct Slot {
	int time = 0;
	int channel = 0;

	friend bool operator==(const Slot&, const Slot&) = default;
	friend auto operator<=>(const Slot&, const Slot&) = default;
};

struct Placement {
	TaskId task = 0;
	Slot slot;

	friend bool operator==(const Placement&, const Placement&) = default;
};

// H x M grid of task ids. A cell normally holds at most one task; the grid
// can also represent a combined (overlaid) schedule whose cells collide, so
// collision freedom is checked rather than enforced.
class Schedule {
public:
	Schedule() = default;
	Schedule(int hyperperiod, int channels);

	int hyperperiod() const { return hyperperiod_; }
	int channels() const { return channels_; }

	void place(TaskId task, Slot slot);
	bool remove(TaskId task, Slot slot);

	std::span<const TaskId> occupants(Slot slot) const { return cells_[cell(slot)]; }
	bool cell_free(Slot slot) const { return cells_[cell(slot)].empty(); }
	// A time-slot is used when any channel holds a task.
	bool time_slot_used(int time) const;
	// All tasks in a time-slot, over all channels.
	std::vector<TaskId> tasks_at(int time) const;
	// Channel-collapsed occupancy: 1 if the task runs anywhere in the time-slot.
	bool occupies(TaskId task, int time) const;

	std::vector<Slot> executions(TaskId task) const;
	std::vector<int> execution_times(TaskId task) const;
	std::vector<Placement> placements() const;
	std::size_t execution_count() const { return count_; }
	bool collision_free() const;

	// Repeats the grid to a longer hyperperiod; `hyperperiod` must be a multiple.
	Schedule tiled(int hyperperiod) const;

	friend bool operator==(const Schedule&, const Schedule&) = default;

private:
	std::size_t cell(Slot s) const;

	int hyperperiod_ = 0;
	int channels_ = 0;
	std::vector<std::vector<TaskId>> cells_;
	std::size_t count_ = 0;
};

}
