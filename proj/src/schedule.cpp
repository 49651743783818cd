#include "tcsched/schedule.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace tcs {

Schedule::Schedule(int hyperperiod, int channels)
: hyperperiod_(hyperperiod), channels_(channels)
{
	if (hyperperiod < 0 || channels < 1)
		throw std::invalid_argument("schedule dimensions must be H >= 0, M >= 1");
	cells_.resize(static_cast<std::size_t>(hyperperiod) * channels);
}

std::size_t Schedule::cell(Slot s) const
{
	if (s.time < 1 || s.time > hyperperiod_ || s.channel < 1 || s.channel > channels_)
		throw std::out_of_range("slot (" + std::to_string(s.time) + ", " + std::to_string(s.channel) +
		                        ") outside " + std::to_string(hyperperiod_) + "x" + std::to_string(channels_));
	return static_cast<std::size_t>(s.time - 1) * channels_ + (s.channel - 1);
}

void Schedule::place(TaskId task, Slot slot)
{
	auto& c = cells_[cell(slot)];
	c.insert(std::upper_bound(c.begin(), c.end(), task), task);
	++count_;
}

bool Schedule::remove(TaskId task, Slot slot)
{
	auto& c = cells_[cell(slot)];
	auto it = std::find(c.begin(), c.end(), task);
	if (it == c.end())
		return false;
	c.erase(it);
	--count_;
	return true;
}

bool Schedule::time_slot_used(int time) const
{
	for (int c = 1; c <= channels_; ++c)
		if (!cell_free({time, c}))
			return true;
	return false;
}

std::vector<TaskId> Schedule::tasks_at(int time) const
{
	std::vector<TaskId> out;
	for (int c = 1; c <= channels_; ++c)
		for (auto t : occupants({time, c}))
			out.push_back(t);
	return out;
}

bool Schedule::occupies(TaskId task, int time) const
{
	for (int c = 1; c <= channels_; ++c) {
		auto occ = occupants({time, c});
		if (std::find(occ.begin(), occ.end(), task) != occ.end())
			return true;
	}
	return false;
}

std::vector<Slot> Schedule::executions(TaskId task) const
{
	std::vector<Slot> out;
	for (int t = 1; t <= hyperperiod_; ++t)
		for (int c = 1; c <= channels_; ++c) {
			auto occ = occupants({t, c});
			if (std::find(occ.begin(), occ.end(), task) != occ.end())
				out.push_back({t, c});
		}
	return out;
}

std::vector<int> Schedule::execution_times(TaskId task) const
{
	std::vector<int> out;
	for (const auto& s : executions(task))
		out.push_back(s.time);
	return out;
}

std::vector<Placement> Schedule::placements() const
{
	std::vector<Placement> out;
	out.reserve(count_);
	for (int t = 1; t <= hyperperiod_; ++t)
		for (int c = 1; c <= channels_; ++c)
			for (auto task : occupants({t, c}))
				out.push_back({task, {t, c}});
	return out;
}

bool Schedule::collision_free() const
{
	return std::all_of(cells_.begin(), cells_.end(), [](const auto& c) { return c.size() <= 1; });
}

Schedule Schedule::tiled(int hyperperiod) const
{
	if (hyperperiod_ == 0) {
		return Schedule(hyperperiod, channels_);
	}
	if (hyperperiod % hyperperiod_ != 0)
		throw std::invalid_argument("tiling length " + std::to_string(hyperperiod) + " is not a multiple of " +
		                            std::to_string(hyperperiod_));
	Schedule out(hyperperiod, channels_);
	for (int rep = 0; rep < hyperperiod / hyperperiod_; ++rep)
		for (const auto& p : placements())
			out.place(p.task, {p.slot.time + rep * hyperperiod_, p.slot.channel});
	return out;
}

}
