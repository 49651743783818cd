#include "tcsched/heuristic.hpp"

#include <algorithm>
#include <chrono>
#include <climits>
#include <cstdlib>
#include <sstream>

#include "tcsched/validator.hpp"

namespace tcs::heur {

SchedulerMode SchedulerMode::parse(const std::string& code)
{
	if (code.size() != 2 || (code[0] != '0' && code[0] != '1') || (code[1] != '0' && code[1] != '1'))
		throw std::invalid_argument("mode must be one of 00, 01, 10, 11: " + code);
	return {code[0] == '0' ? Shifting::TimeFirst : Shifting::ChannelFirst,
	        code[1] == '0' ? Ordering::AgeFirst : Ordering::JitterFirst};
}

std::string SchedulerMode::code() const
{
	std::string s;
	s += shifting == Shifting::TimeFirst ? '0' : '1';
	s += ordering == Ordering::AgeFirst ? '0' : '1';
	return s;
}

namespace {

int floor_div(int a, int b)
{
	int q = a / b;
	return ((a % b != 0) && ((a < 0) != (b < 0))) ? q - 1 : q;
}

}

int leaf_target(int period, int k)
{
	return k * period;
}

int backward_slot(int child_slot, std::optional<int> child_prev, int members, int delta_parent, int max_age)
{
	const int denom = members - delta_parent;
	if (denom == 0)
		throw DegenerateDenominator("job size equals the parent's distance to the leaf");
	const int room = child_prev ? child_slot - *child_prev - 1 : child_slot - 1;
	const int offset = std::max(0, std::min(floor_div(room, denom), max_age));
	return std::max(1, child_slot - offset);
}

int forward_slot(int parent_slot, std::optional<int> parent_next, int k, int period, int delta_parent, int max_age)
{
	if (delta_parent == 0)
		throw DegenerateDenominator("the leaf has no forward children");
	const int bound = parent_next ? std::min(k * period, *parent_next) : k * period;
	const int offset = std::max(0, std::min(floor_div(bound - parent_slot, delta_parent), max_age));
	return parent_slot + offset;
}

SearchBox search_box(const SearchBoxInput& in)
{
	SearchBox box;
	const int end = in.k * in.period;
	if (in.k == 1) {
		box.lower = in.members - in.delta_common;
		box.upper = end + in.leaf_jitter - in.delta_common;
		return box;
	}
	box.lower = end - in.leaf_jitter - in.age_sum;
	box.upper = end + in.leaf_jitter - in.delta_common;
	if (in.child_prev)
		box.lower = std::max(box.lower, *in.child_prev + 1);
	if (in.common_prev) {
		box.lower = std::max(box.lower, *in.common_prev + in.period - in.common_jitter);
		box.upper = std::min(box.upper, *in.common_prev + in.period + in.common_jitter);
	}
	return box;
}

std::optional<int> find_common_execution(std::span<const int> executions, const SearchBox& box)
{
	std::optional<int> best;
	for (int t : executions)
		if (t >= box.lower && t <= box.upper && (!best || t > *best))
			best = t;
	return best;
}

std::vector<std::size_t> order_siblings(const TaskSet& ts, std::span<const std::size_t> tasks,
                                        std::span<const int> ages, SchedulerMode mode)
{
	std::vector<std::size_t> idx(tasks.size());
	for (std::size_t i = 0; i < idx.size(); ++i)
		idx[i] = i;
	auto key = [&](std::size_t i) {
		return mode.ordering == Ordering::AgeFirst ? ages[i] : ts.jitter(tasks[i]);
	};
	std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
		return std::pair(key(a), ts.id(tasks[a])) < std::pair(key(b), ts.id(tasks[b]));
	});
	std::vector<std::size_t> out;
	for (auto i : idx)
		out.push_back(tasks[i]);
	return out;
}

std::optional<Slot> resolve_slot(int target, int jitter, int channels, Shifting shifting,
                                 const std::function<bool(int)>& time_ok, const std::function<bool(Slot)>& cell_ok)
{
	std::vector<int> offsets{0};
	for (int j = 1; j <= jitter; ++j) {
		offsets.push_back(j);
		offsets.push_back(-j);
	}
	std::vector<signed char> ok(offsets.size(), -1);
	auto time_admissible = [&](std::size_t k) {
		if (ok[k] < 0)
			ok[k] = time_ok(target + offsets[k]) ? 1 : 0;
		return ok[k] == 1;
	};
	if (shifting == Shifting::TimeFirst) {
		for (int c = 1; c <= channels; ++c)
			for (std::size_t k = 0; k < offsets.size(); ++k)
				if (time_admissible(k) && (cell_ok({target + offsets[k], c})))
					return Slot{target + offsets[k], c};
	} else {
		for (std::size_t k = 0; k < offsets.size(); ++k) {
			if (!time_admissible(k))
				continue;
			for (int c = 1; c <= channels; ++c)
				if (cell_ok({target + offsets[k], c}))
					return Slot{target + offsets[k], c};
		}
	}
	return std::nullopt;
}

namespace {

struct AdaptLimits {
	std::vector<int> first_lo, first_hi;
};

struct Serve {
	std::size_t task;
	int time;
	int max_age;
};

class Builder {
public:
	Builder(const TaskSet& ts, SchedulerMode mode, const AdaptLimits* limits)
	: ts_(ts), mode_(mode), limits_(limits), n_(ts.size()), H_(ts.hyperperiod()), M_(ts.channels()),
	  sched_(H_, M_), times_(n_), at_(H_ + 1)
	{
		by_window_.resize(n_);
		for (std::size_t i = 0; i < n_; ++i)
			by_window_[i].assign(H_ / ts.period(i), 0);
		const auto& topo = ts.topological_order();
		for (const auto& job : ts.jobs()) {
			std::vector<std::size_t> order;
			for (auto i : topo)
				if (job.contains(i))
					order.push_back(i);
			std::vector<int> depth(n_, 0);
			for (auto m : order)
				for (const auto& c : ts.children(m))
					if (job.contains(c.task))
						depth[c.task] = std::max(depth[c.task], depth[m] + 1);
			job_topo_.push_back(std::move(order));
			depth_.push_back(std::move(depth));
		}
		job_done_.assign(ts.jobs().size(), 0);
	}

	SolveOutcome run(HeuristicStats* stats)
	{
		SolveOutcome out;
		std::vector<std::size_t> jobs(ts_.jobs().size());
		for (std::size_t j = 0; j < jobs.size(); ++j)
			jobs[j] = j;
		std::stable_sort(jobs.begin(), jobs.end(), [&](std::size_t a, std::size_t b) {
			const auto& ja = ts_.jobs()[a];
			const auto& jb = ts_.jobs()[b];
			if (ja.longest_path != jb.longest_path)
				return ja.longest_path > jb.longest_path;
			return ja.spec.id < jb.spec.id;
		});
		for (auto j : jobs) {
			const int K = H_ / ts_.jobs()[j].spec.period;
			inst_.assign(K + 1, std::vector<int>(n_, 0));
			current_job_ = j;
			for (int k = 1; k <= K; ++k) {
				if (!schedule_instance(j, k)) {
					out.status = Status::Unschedulable;
					out.blocking_task = ts_.id(blocking_);
					out.blocking_subperiod = k;
					std::ostringstream os;
					os << "no admissible slot for task " << ts_.id(blocking_) << " of job "
					   << ts_.jobs()[j].spec.id << " in subperiod " << k;
					out.message = os.str();
					if (stats)
						stats->reused += reused_;
					return out;
				}
			}
			job_done_[j] = 1;
			current_job_ = SIZE_MAX;
		}
		if (stats)
			stats->reused += reused_;
		out.status = Status::Feasible;
		out.schedule = sched_;
		return out;
	}

private:
	int window_of(std::size_t i, int t) const { return (t - 1) / ts_.period(i); }
	int window_end(std::size_t i, int t) const { return (window_of(i, t) + 1) * ts_.period(i); }
	int window_start(std::size_t i, int t) const { return window_of(i, t) * ts_.period(i) + 1; }

	int latest_before(std::size_t i, int t) const
	{
		const auto& e = times_[i];
		auto it = std::lower_bound(e.begin(), e.end(), t);
		return it == e.begin() ? 0 : *std::prev(it);
	}

	bool any_between(std::size_t i, int lo, int hi) const   // exclusive bounds
	{
		const auto& e = times_[i];
		auto it = std::upper_bound(e.begin(), e.end(), lo);
		return it != e.end() && *it < hi;
	}

	bool jitter_ok(std::size_t i, int t) const
	{
		auto w = by_window_[i];
		const int W = static_cast<int>(w.size());
		if (W < 2)
			return true;
		w[window_of(i, t)] = t;
		const int P = ts_.period(i), J = ts_.jitter(i);
		std::vector<int> gap(W, INT_MIN);
		for (int k = 0; k < W; ++k) {
			int a = w[k], b = w[(k + 1) % W];
			if (a && b)
				gap[k] = b - a + (k == W - 1 ? H_ : 0);
		}
		for (int k = 0; k < W; ++k) {
			if (gap[k] == INT_MIN)
				continue;
			if (std::abs(gap[k] - P) > J)
				return false;
			int next = gap[(k + 1) % W];
			if (next != INT_MIN && std::abs(next - gap[k]) > J)
				return false;
		}
		return true;
	}

	bool adapt_ok(std::size_t i, int t) const
	{
		if (!limits_)
			return true;
		if (window_of(i, t) == 0 && (t < limits_->first_lo[i] || t > limits_->first_hi[i]))
			return false;
		return true;
	}

	bool trace_ok(std::size_t j, int leaf_time)
	{
		const auto& order = job_topo_[j];
		for (auto m : order)
			used_[m].clear();
		used_[ts_.jobs()[j].leaf].push_back(leaf_time);
		for (auto it = order.rbegin(); it != order.rend(); ++it) {
			auto child = *it;
			if (used_[child].empty())
				continue;
			for (const auto& p : ts_.parents(child))
				for (int s : used_[child]) {
					int u = latest_before(p.task, s);
					auto& up = used_[p.task];
					if (u > 0 && std::find(up.begin(), up.end(), u) == up.end()) {
						up.push_back(u);
						if (up.size() > 1)
							return false;
					}
				}
		}
		return true;
	}

	// Consistency of completed job instances after tentatively adding (i, t).
	bool paths_ok(std::size_t i, int t)
	{
		if (used_.empty())
			used_.resize(n_);
		auto& e = times_[i];
		auto pos = e.insert(std::upper_bound(e.begin(), e.end(), t), t);
		bool ok = true;
		for (auto j : ts_.jobs_of(i)) {
			if (!job_done_[j] && j != current_job_)
				continue;
			const auto leaf = ts_.jobs()[j].leaf;
			for (int x : times_[leaf]) {
				if (j == current_job_ && x == current_leaf_time_)
					continue;
				if (j == current_job_ && !instance_leaf(x))
					continue;
				if (!trace_ok(j, x)) {
					ok = false;
					break;
				}
			}
			if (!ok)
				break;
		}
		times_[i].erase(pos);
		return ok;
	}

	bool instance_leaf(int x) const
	{
		for (std::size_t k = 1; k < inst_.size(); ++k)
			if (k != static_cast<std::size_t>(current_k_) && inst_[k][ts_.jobs()[current_job_].leaf] == x)
				return true;
		return false;
	}

	// Backward: the new execution must be the latest one before every child.
	// Forward: every listed parent execution must be the latest before the new one.
	bool time_ok(std::size_t i, int t, int lo, int hi, std::span<const Serve> children, std::span<const Serve> parents)
	{
		if (t < std::max(1, lo) || t > std::min(H_, hi))
			return false;
		if (by_window_[i][window_of(i, t)] != 0)
			return false;
		// in-job ancestors need room inside the own window
		if (t - window_start(i, t) < depth_[current_job_][i])
			return false;
		for (auto o : at_[t])
			if (ts_.intersects(i, o))
				return false;
		if (!adapt_ok(i, t) || !jitter_ok(i, t))
			return false;
		for (const auto& c : children)
			if (any_between(i, t, c.time))
				return false;
		for (const auto& p : parents)
			if (latest_before(p.task, t) != p.time)
				return false;
		return paths_ok(i, t);
	}

	void place(std::size_t i, Slot s)
	{
		sched_.place(ts_.id(i), s);
		auto& e = times_[i];
		e.insert(std::upper_bound(e.begin(), e.end(), s.time), s.time);
		by_window_[i][window_of(i, s.time)] = s.time;
		at_[s.time].push_back(i);
	}

	// Moves the target into the interval allowed by the placement range and by
	// the executions of the neighbouring own windows.
	int project(std::size_t i, int target, int lo, int hi) const
	{
		lo = std::max(lo, 1);
		hi = std::min(hi, H_);
		if (lo > hi)
			return target;
		const int P = ts_.period(i), J = ts_.jitter(i);
		const int W = static_cast<int>(by_window_[i].size());
		const int w = std::clamp(window_of(i, std::clamp(target, lo, hi)), 0, W - 1);
		int a = lo, b = hi;
		auto narrow = [&](int x, int y) {
			if (std::max(a, x) <= std::min(b, y)) {
				a = std::max(a, x);
				b = std::min(b, y);
			}
		};
		narrow(w * P + 1, (w + 1) * P);
		if (W > 1) {
			if (int e = by_window_[i][(w + W - 1) % W])
				narrow(e + P - J - (w == 0 ? H_ : 0), e + P + J - (w == 0 ? H_ : 0));
			if (int e = by_window_[i][(w + 1) % W])
				narrow(e - P - J + (w == W - 1 ? H_ : 0), e - P + J + (w == W - 1 ? H_ : 0));
		}
		if (limits_) {
			if (w == 0)
				narrow(limits_->first_lo[i], limits_->first_hi[i]);
		}
		return std::clamp(target, a, b);
	}

	std::optional<Slot> resolve(std::size_t i, int target, int lo, int hi, std::span<const Serve> children,
	                            std::span<const Serve> parents)
	{
		target = project(i, target, lo, hi);
		return resolve_slot(
			target, ts_.jitter(i), M_, mode_.shifting,
			[&](int t) { return time_ok(i, t, lo, hi, children, parents); },
			[&](Slot s) { return sched_.cell_free(s); });
	}

	std::optional<int> prev_instance(int k, std::size_t task) const
	{
		if (k < 2 || inst_[k - 1][task] == 0)
			return std::nullopt;
		return inst_[k - 1][task];
	}

	struct Snapshot {
		Schedule sched;
		check::ExecutionTimes times;
		std::vector<std::vector<int>> by_window;
		std::vector<std::vector<std::size_t>> at;
		std::vector<int> inst;
	};

	Snapshot snapshot(int k) const { return {sched_, times_, by_window_, at_, inst_[k]}; }

	void restore(Snapshot s, int k)
	{
		sched_ = std::move(s.sched);
		times_ = std::move(s.times);
		by_window_ = std::move(s.by_window);
		at_ = std::move(s.at);
		inst_[k] = std::move(s.inst);
	}

	int min_age_sum(std::size_t j, std::size_t from) const
	{
		const auto& job = ts_.jobs()[j];
		std::vector<int> best(n_, INT_MAX / 4);
		best[job.leaf] = 0;
		const auto& order = job_topo_[j];
		for (auto it = order.rbegin(); it != order.rend(); ++it)
			for (const auto& c : ts_.children(*it))
				if (job.contains(c.task))
					best[*it] = std::min(best[*it], best[c.task] + c.max_age);
		return best[from];
	}

	bool try_common(std::size_t j, int k)
	{
		const auto& job = ts_.jobs()[j];
		const int P = job.spec.period;
		std::vector<std::size_t> candidates;
		for (auto m : job.members)
			if (m != job.leaf && ts_.jobs_of(m).size() > 1 && !times_[m].empty())
				candidates.push_back(m);
		std::stable_sort(candidates.begin(), candidates.end(), [&](std::size_t a, std::size_t b) {
			return std::pair(job.distance[a], a) < std::pair(job.distance[b], b);
		});
		for (auto com : candidates) {
			SearchBoxInput in;
			in.k = k;
			in.period = P;
			in.leaf_jitter = ts_.jitter(job.leaf);
			in.members = static_cast<int>(job.members.size());
			in.delta_common = job.distance[com];
			in.common_jitter = ts_.jitter(com);
			in.age_sum = min_age_sum(j, com);
			if (k >= 2) {
				int child_prev = 0;
				for (const auto& c : ts_.children(com))
					if (job.contains(c.task))
						child_prev = std::max(child_prev, inst_[k - 1][c.task]);
				if (child_prev)
					in.child_prev = child_prev;
				in.common_prev = prev_instance(k, com);
			}
			auto box = search_box(in);
			box.lower = std::max(box.lower, (k - 1) * P + 1);
			box.upper = std::min(box.upper, k * P - 1);
			if (box.empty())
				continue;
			auto found = find_common_execution(times_[com], box);
			if (!found)
				continue;
			auto saved = snapshot(k);
			if (forward_from(j, k, com, *found)) {
				++reused_;
				return true;
			}
			restore(std::move(saved), k);
		}
		return false;
	}

	bool forward_from(std::size_t j, int k, std::size_t com, int time)
	{
		const auto& job = ts_.jobs()[j];
		const int P = job.spec.period, K = H_ / P;
		std::vector<char> below(n_, 0);
		below[com] = 1;
		inst_[k][com] = time;
		for (auto c : job_topo_[j]) {
			if (c == com)
				continue;
			std::vector<Serve> placed;
			bool reachable = false;
			for (const auto& p : ts_.parents(c))
				if (below[p.task]) {
					reachable = true;
					placed.push_back({p.task, inst_[k][p.task], p.max_age});
				}
			if (!reachable)
				continue;
			below[c] = 1;
			auto anchor = *std::max_element(placed.begin(), placed.end(),
			                                [](const Serve& a, const Serve& b) { return a.time < b.time; });
			std::optional<int> next;
			if (anchor.task == com && k < K) {
				auto it = std::upper_bound(times_[com].begin(), times_[com].end(), anchor.time);
				if (it != times_[com].end())
					next = *it;
			}
			int target = forward_slot(anchor.time, next, k, P, job.distance[anchor.task], anchor.max_age);
			int lo = (k - 1) * P + 1, hi = k * P;
			for (const auto& p : placed) {
				lo = std::max(lo, p.time + 1);
				hi = std::min({hi, p.time + p.max_age, window_end(c, p.time)});
			}
			target = std::clamp(target, lo, std::max(lo, hi));
			if (c == job.leaf)
				current_leaf_time_ = 0;
			// an execution already serving every placed parent is kept
			int existing = 0;
			for (int t : times_[c])
				if (t >= lo && t <= hi)
					existing = t;
			if (existing && std::all_of(placed.begin(), placed.end(),
			                            [&](const Serve& p) { return latest_before(p.task, existing) == p.time; })) {
				inst_[k][c] = existing;
				if (c == job.leaf)
					current_leaf_time_ = existing;
				continue;
			}
			auto slot = resolve(c, target, lo, hi, {}, placed);
			if (!slot) {
				blocking_ = c;
				return false;
			}
			place(c, *slot);
			inst_[k][c] = slot->time;
			if (c == job.leaf)
				current_leaf_time_ = slot->time;
		}
		return true;
	}

	bool schedule_instance(std::size_t j, int k)
	{
		const auto& job = ts_.jobs()[j];
		const int P = job.spec.period;
		const int lo_k = (k - 1) * P + 1, hi_k = k * P;
		current_k_ = k;
		current_leaf_time_ = 0;

		if (!try_common(j, k)) {
			const auto leaf = job.leaf;
			int existing = 0;
			for (int t : times_[leaf])
				if (t >= lo_k && t <= hi_k)
					existing = t;
			if (existing) {
				inst_[k][leaf] = existing;
			} else {
				auto slot = resolve(leaf, leaf_target(P, k), lo_k, hi_k, {}, {});
				if (!slot) {
					blocking_ = leaf;
					return false;
				}
				place(leaf, *slot);
				inst_[k][leaf] = slot->time;
			}
			current_leaf_time_ = inst_[k][leaf];
		}
		return backward(j, k);
	}

	bool backward(std::size_t j, int k)
	{
		const auto& job = ts_.jobs()[j];
		const int members = static_cast<int>(job.members.size());
		while (true) {
			std::vector<std::size_t> ready;
			std::vector<int> ages;
			std::vector<Serve> anchors;
			for (auto m : job_topo_[j]) {
				if (inst_[k][m])
					continue;
				bool all = true;
				Serve anchor{0, INT_MAX, 0};
				for (const auto& c : ts_.children(m)) {
					if (!job.contains(c.task))
						continue;
					if (!inst_[k][c.task]) {
						all = false;
						break;
					}
					if (inst_[k][c.task] < anchor.time)
						anchor = {c.task, inst_[k][c.task], c.max_age};
				}
				if (!all || anchor.time == INT_MAX)
					continue;
				ready.push_back(m);
				ages.push_back(anchor.max_age);
				anchors.push_back(anchor);
			}
			if (ready.empty())
				return true;
			const auto m = order_siblings(ts_, ready, ages, mode_).front();
			const Serve anchor = anchors[std::find(ready.begin(), ready.end(), m) - ready.begin()];

			std::vector<Serve> children;
			int lo = 1, hi = INT_MAX, last = 0;
			for (const auto& c : ts_.children(m)) {
				if (!job.contains(c.task))
					continue;
				const int tc = inst_[k][c.task];
				children.push_back({c.task, tc, c.max_age});
				lo = std::max({lo, window_start(c.task, tc), tc - c.max_age});
				hi = std::min(hi, tc - 1);
				last = std::max(last, tc);
			}
			const int e = latest_before(m, hi + 1);
			if (e >= lo && e > 0 && !any_between(m, hi, last)) {
				inst_[k][m] = e;
				continue;
			}
			int target;
			try {
				target = backward_slot(anchor.time, prev_instance(k, anchor.task), members, job.distance[m],
				                       anchor.max_age);
			} catch (const DegenerateDenominator&) {
				target = anchor.time - 1;
			}
			auto slot = resolve(m, std::max(target, 1), lo, hi, children, {});
			if (!slot) {
				blocking_ = m;
				return false;
			}
			place(m, *slot);
			inst_[k][m] = slot->time;
		}
	}

	const TaskSet& ts_;
	SchedulerMode mode_;
	const AdaptLimits* limits_;
	std::size_t n_;
	int H_, M_;
	Schedule sched_;
	check::ExecutionTimes times_;
	std::vector<std::vector<std::size_t>> at_;
	std::vector<std::vector<int>> by_window_;
	std::vector<std::vector<std::size_t>> job_topo_;
	std::vector<std::vector<int>> depth_;   // [job][task] longest in-job path from an entry
	std::vector<char> job_done_;
	std::vector<std::vector<int>> inst_;   // [k][task] slot of the current job's instance k
	std::vector<std::vector<int>> used_;
	std::size_t current_job_ = SIZE_MAX;
	int current_k_ = 0;
	int current_leaf_time_ = 0;
	std::size_t blocking_ = 0;
	std::size_t reused_ = 0;
};

using Clock = std::chrono::steady_clock;

double since(Clock::time_point start)
{
	return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

}

SolveOutcome schedule(const TaskSet& ts, SchedulerMode mode, HeuristicStats* stats)
{
	const auto start = Clock::now();
	if (ts.empty()) {
		SolveOutcome out;
		out.status = Status::Feasible;
		out.schedule = Schedule(ts.hyperperiod(), ts.channels());
		return out;
	}
	Builder b(ts, mode, nullptr);
	auto out = b.run(stats);
	if (out.status == Status::Feasible && !validate(*out.schedule, ts).overall()) {
		if (stats)
			++stats->gate_rejections;
		out.status = Status::Unschedulable;
		out.message = "constructed schedule failed validation: " + validate(*out.schedule, ts).summary();
		out.schedule.reset();
	}
	out.stats.elapsed_ms = since(start);
	return out;
}

SolveOutcome adapt(const exact::MergeResult& merge, SchedulerMode mode, HeuristicStats* stats)
{
	const auto start = Clock::now();
	const TaskSet& ts = merge.taskset;
	const int H = ts.hyperperiod();
	AdaptLimits limits;
	limits.first_lo.assign(ts.size(), INT_MIN / 2);
	limits.first_hi.assign(ts.size(), INT_MAX / 2);
	for (const auto& src : merge.sources)
		for (auto id : src.tasks) {
			auto idx = ts.find(id);
			if (!idx)
				continue;
			auto times = src.schedule.execution_times(id);
			if (times.empty())
				continue;
			const int base = times.back() + ts.period(*idx) - src.schedule.hyperperiod();
			limits.first_lo[*idx] = base - ts.jitter(*idx);
			limits.first_hi[*idx] = base + ts.jitter(*idx);
		}

	SolveOutcome out;
	if (ts.empty()) {
		out.status = Status::Feasible;
		out.schedule = Schedule(H, ts.channels());
	} else {
		Builder b(ts, mode, &limits);
		out = b.run(stats);
	}
	if (out.status == Status::Feasible) {
		bool ok = validate(*out.schedule, ts).overall();
		for (const auto& src : merge.sources)
			ok = ok && validate_transition(src.schedule, *out.schedule, ts).overall();
		if (!ok) {
			if (stats)
				++stats->gate_rejections;
			out.status = Status::Unschedulable;
			out.message = "adapted schedule failed validation";
			out.schedule.reset();
		}
	}
	out.stats.elapsed_ms = since(start);
	return out;
}

SolveOutcome adapt(const Schedule& first_schedule, const Schedule& second_schedule, const TaskSet& first,
                   const TaskSet& second, SchedulerMode mode, HeuristicStats* stats)
{
	return adapt(exact::merge_schedules(first_schedule, second_schedule, first, second), mode, stats);
}

}
