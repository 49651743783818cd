#include "tcsched/lp.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <vector>

#include "tcsched/io.hpp"

namespace tcs::lp {

namespace {

std::string id_text(long long id)
{
	return id < 0 ? "m" + std::to_string(-id) : std::to_string(id);
}

struct Expr {
	std::map<std::string, double> terms;
	double constant = 0;

	void add(const std::string& var, double coef) { terms[var] += coef; }
};

class Writer {
public:
	Writer(const TaskSet& ts) : ts_(ts), H_(ts.hyperperiod()), M_(ts.channels()) {}

	// sum over channels of a_T_c_t
	void add_slot(Expr& e, std::size_t task, int t, double coef) const
	{
		for (int c = 1; c <= M_; ++c)
			e.add(allocation_name(ts_.id(task), c, t), coef);
	}

	void row(const std::string& family, const std::string& name, Expr e, const char* sense, double rhs)
	{
		++summary.rows[family];
		rows_ << " " << name << ":";
		emit_terms(rows_, e);
		rows_ << " " << sense << " " << format(rhs - e.constant) << "\n";
	}

	void objective(const char* sense, const Expr& e)
	{
		header_ << sense << "\n obj:";
		emit_terms(header_, e, true);
		header_ << "\n";
	}

	void binary(const std::string& v)
	{
		binaries_.push_back(v);
		++summary.binaries;
	}

	void continuous(const std::string&) { ++summary.continuous; }

	void finish(std::ostream& out)
	{
		out << "\\ allocation model, H = " << H_ << ", M = " << M_ << ", " << ts_.size() << " tasks\n";
		if (header_.str().empty())
			header_ << "Minimize\n obj:\n";
		out << header_.str() << "Subject To\n" << rows_.str();
		if (!binaries_.empty()) {
			out << "Binaries\n";
			for (std::size_t i = 0; i < binaries_.size(); ++i)
				out << " " << binaries_[i] << ((i % 8 == 7) ? "\n" : "");
			if (binaries_.size() % 8 != 0)
				out << "\n";
		}
		out << "End\n";
	}

	ModelSummary summary;

private:
	static std::string format(double v)
	{
		std::ostringstream os;
		os.precision(17);
		os << v;
		return os.str();
	}

	void emit_terms(std::ostream& os, const Expr& e, bool allow_empty = false)
	{
		int written = 0;
		for (const auto& [var, coef] : e.terms) {
			if (coef == 0)
				continue;
			if (written > 0 && written % 8 == 0)
				os << "\n  ";
			os << (coef < 0 ? " - " : " + ");
			if (std::abs(coef) != 1)
				os << format(std::abs(coef)) << " ";
			os << var;
			++written;
		}
		if (written == 0 && !allow_empty && !e.terms.empty())
			os << " 0 " << e.terms.begin()->first;
	}

	const TaskSet& ts_;
	int H_, M_;
	std::ostringstream header_, rows_;
	std::vector<std::string> binaries_;
};

int wrap(int t, int H)
{
	return ((t - 1) % H + H) % H + 1;
}

}

long long ModelSummary::total_rows() const
{
	long long n = 0;
	for (const auto& [family, count] : rows)
		n += count;
	return n;
}

std::string allocation_name(TaskId task, int channel, int time)
{
	return "a_" + id_text(task) + "_" + std::to_string(channel) + "_" + std::to_string(time);
}

ModelSummary write_model(std::ostream& out, const TaskSet& ts, const ExportOptions& options)
{
	Writer w(ts);
	const int H = ts.hyperperiod(), M = ts.channels();
	const std::size_t n = ts.size();
	if (n == 0) {
		w.finish(out);
		return w.summary;
	}
	auto tid = [&](std::size_t i) { return id_text(ts.id(i)); };

	for (std::size_t i = 0; i < n; ++i)
		for (int c = 1; c <= M; ++c)
			for (int t = 1; t <= H; ++t)
				w.binary(allocation_name(ts.id(i), c, t));

	// objective
	if (options.objective == exact::Objective::MinimizeSlotChanges) {
		const long long N = exact::slot_change_pairs(ts);
		Expr obj;
		for (std::size_t i = 0; i < n && N > 0; ++i) {
			const int P = ts.period(i);
			for (int t = 1; t <= H - P; ++t) {
				const std::string suffix = tid(i) + "_" + std::to_string(t);
				obj.add("p_" + suffix, 1.0 / static_cast<double>(N));
				obj.add("n_" + suffix, 1.0 / static_cast<double>(N));
				w.continuous("p_" + suffix);
				w.continuous("n_" + suffix);
				Expr e;
				w.add_slot(e, i, t, 1);
				w.add_slot(e, i, t + P, -1);
				e.add("p_" + suffix, -1);
				e.add("n_" + suffix, 1);
				w.row("o1", "o1_" + suffix, std::move(e), "=", 0);
			}
		}
		w.objective("Minimize", obj);
	} else if (options.objective == exact::Objective::MaximizeStability) {
		if (!options.combined)
			throw std::invalid_argument("the stability objective needs a combined schedule");
		Expr obj;
		for (const auto& p : options.combined->placements())
			if (auto idx = ts.find(p.task))
				for (int c = 1; c <= M; ++c)
					obj.terms[allocation_name(p.task, c, p.slot.time)] = 1;
		w.objective("Maximize", obj);
	}

	// c1
	for (int c = 1; c <= M; ++c)
		for (int t = 1; t <= H; ++t) {
			Expr e;
			for (std::size_t i = 0; i < n; ++i)
				e.add(allocation_name(ts.id(i), c, t), 1);
			w.row("c1", "c1_" + std::to_string(c) + "_" + std::to_string(t), std::move(e), "<=", 1);
		}

	// c2
	for (std::size_t a = 0; a < n; ++a)
		for (std::size_t b = a + 1; b < n; ++b) {
			if (!ts.intersects(a, b))
				continue;
			for (int t = 1; t <= H; ++t) {
				Expr e;
				w.add_slot(e, a, t, 1);
				w.add_slot(e, b, t, 1);
				w.row("c2", "c2_" + tid(a) + "_" + tid(b) + "_" + std::to_string(t), std::move(e), "<=", 1);
			}
		}

	// c3
	for (std::size_t i = 0; i < n; ++i) {
		const int P = ts.period(i);
		for (const auto& p : ts.parents(i))
			for (int t = 1; t <= H; ++t) {
				Expr e;
				const int lo = std::max(((t - 1) / P) * P + 1, t - p.max_age);
				for (int s = lo; s < t; ++s)
					w.add_slot(e, p.task, s, 1);
				w.add_slot(e, i, t, -1);
				w.row("c3", "c3_" + tid(i) + "_" + tid(p.task) + "_" + std::to_string(t), std::move(e), ">=", 0);
			}
	}

	// c4
	for (std::size_t i = 0; i < n; ++i) {
		const int P = ts.period(i);
		for (int k = 1; k <= H / P; ++k) {
			Expr e;
			for (int t = (k - 1) * P + 1; t <= k * P; ++t)
				w.add_slot(e, i, t, 1);
			w.row("c4", "c4_" + tid(i) + "_" + std::to_string(k), std::move(e), "=", 1);
		}
	}

	// c5 family
	for (std::size_t i = 0; i < n; ++i) {
		const int P = ts.period(i), J = ts.jitter(i), W = H / P;
		for (int t = 1; t <= H; ++t) {
			Expr e;
			std::set<int> window;
			for (int s = t - P - J; s <= t - P + J; ++s)
				window.insert(wrap(s, H));
			for (int s : window)
				w.add_slot(e, i, s, 1);
			w.add_slot(e, i, t, -1);
			w.row("c5", "c5_" + tid(i) + "_" + std::to_string(t), std::move(e), ">=", 0);
		}
		if (W < 2)
			continue;
		// gap k runs from period k to period k+1 (cyclic)
		auto gap = [&](int k) {
			Expr g;
			const int next = (k + 1) % W;
			for (int t = next * P + 1; t <= (next + 1) * P; ++t)
				w.add_slot(g, i, t, t);
			for (int t = k * P + 1; t <= (k + 1) * P; ++t)
				w.add_slot(g, i, t, -t);
			if (k == W - 1)
				g.constant += H;
			return g;
		};
		for (int k = 0; k < W; ++k) {
			const std::string suffix = tid(i) + "_" + std::to_string(k + 1);
			w.row("c5p", "c5p_" + suffix + "_hi", gap(k), "<=", P + J);
			w.row("c5p", "c5p_" + suffix + "_lo", gap(k), ">=", P - J);
		}
		const int pairs = W == 2 ? 1 : W;
		for (int k = 0; k < pairs; ++k) {
			Expr d = gap((k + 1) % W);
			Expr g = gap(k);
			for (const auto& [var, coef] : g.terms)
				d.add(var, -coef);
			d.constant -= g.constant;
			const std::string suffix = tid(i) + "_" + std::to_string(k + 1);
			w.row("c5g", "c5g_" + suffix + "_hi", d, "<=", J);
			w.row("c5g", "c5g_" + suffix + "_lo", d, ">=", -J);
		}
	}

	// path rows
	for (std::size_t j = 0; j < ts.jobs().size(); ++j) {
		const auto& job = ts.jobs()[j];
		const auto leaf = job.leaf;
		const bool mixed = std::any_of(job.members.begin(), job.members.end(),
		                               [&](std::size_t m) { return ts.period(m) != ts.period(leaf); });
		if (!mixed)
			continue;
		const int PL = ts.period(leaf);
		for (int win = 1; win <= H / PL; ++win) {
			const std::string base = std::to_string(j) + "_" + std::to_string(win) + "_";
			auto used = [&](std::size_t m, int t) { return "u_" + base + tid(m) + "_" + std::to_string(t); };
			for (auto m : job.members) {
				if (m == leaf)
					continue;
				Expr one;
				for (int t = 1; t <= H; ++t) {
					w.binary(used(m, t));
					one.add(used(m, t), 1);
					Expr real;
					real.add(used(m, t), 1);
					w.add_slot(real, m, t, -1);
					w.row("c11", "c11_" + base + tid(m) + "_" + std::to_string(t), std::move(real), "<=", 0);
				}
				w.row("c10", "c10_" + base + tid(m), std::move(one), "=", 1);
			}
			for (auto c : job.members)
				for (const auto& p : ts.parents(c)) {
					if (!job.contains(p.task))
						continue;
					for (int s = 1; s <= H; ++s) {
						if (c == leaf && (s < (win - 1) * PL + 1 || s > win * PL))
							continue;
						for (int t = 1; t < s; ++t) {
							// used(c, s) and an execution of p at t with none in between force used(p, t)
							Expr e;
							e.add(used(p.task, t), 1);
							if (c == leaf)
								w.add_slot(e, c, s, -1);
							else
								e.add(used(c, s), -1);
							w.add_slot(e, p.task, t, -1);
							for (int k = t + 1; k < s; ++k)
								w.add_slot(e, p.task, k, 1);
							w.row("c8", "c8_" + base + tid(p.task) + "_" + tid(c) + "_" + std::to_string(s) + "_" +
							                std::to_string(t),
							      std::move(e), ">=", -1);
						}
					}
				}
		}
	}

	// c12
	if (options.combined) {
		std::set<std::pair<std::size_t, int>> seen;
		for (const auto& p : options.combined->placements()) {
			auto idx = ts.find(p.task);
			if (!idx || !seen.insert({*idx, p.slot.time}).second)
				continue;
			const int J = ts.jitter(*idx);
			Expr e;
			for (int t = std::max(1, p.slot.time - J); t <= std::min(H, p.slot.time + J); ++t)
				w.add_slot(e, *idx, t, 1);
			w.row("c12", "c12_" + tid(*idx) + "_" + std::to_string(p.slot.time), std::move(e), ">=", 1);
		}
	}

	w.finish(out);
	return w.summary;
}

ModelSummary export_model(const std::filesystem::path& path, const TaskSet& ts, const ExportOptions& options)
{
	std::ofstream f(path);
	if (!f)
		throw io::IoError("cannot write " + path.string());
	auto s = write_model(f, ts, options);
	f.flush();
	if (!f)
		throw io::IoError("failed writing " + path.string());
	return s;
}

namespace {

bool parse_int(std::string_view s, long long& v)
{
	bool neg = false;
	if (!s.empty() && s.front() == 'm') {
		neg = true;
		s.remove_prefix(1);
	}
	auto r = std::from_chars(s.data(), s.data() + s.size(), v);
	if (r.ec != std::errc() || r.ptr != s.data() + s.size())
		return false;
	if (neg)
		v = -v;
	return true;
}

}

Schedule read_solution(std::istream& in, const TaskSet& ts)
{
	Schedule s(ts.hyperperiod(), ts.channels());
	std::string line;
	while (std::getline(in, line)) {
		std::istringstream ls(line);
		std::string name, value;
		if (!(ls >> name >> value) || name.rfind("a_", 0) != 0)
			continue;
		double v;
		try {
			v = std::stod(value);
		} catch (const std::exception&) {
			continue;
		}
		if (v <= 0.5)
			continue;
		std::string_view rest(name);
		rest.remove_prefix(2);
		auto a = rest.find('_');
		auto b = rest.find('_', a == std::string_view::npos ? a : a + 1);
		long long id, c, t;
		if (a == std::string_view::npos || b == std::string_view::npos || !parse_int(rest.substr(0, a), id) ||
		    !parse_int(rest.substr(a + 1, b - a - 1), c) || !parse_int(rest.substr(b + 1), t))
			throw io::IoError("malformed allocation variable " + name);
		if (!ts.find(static_cast<TaskId>(id)) || c < 1 || c > ts.channels() || t < 1 || t > ts.hyperperiod())
			throw io::IoError("allocation variable " + name + " is outside the model");
		s.place(static_cast<TaskId>(id), {static_cast<int>(t), static_cast<int>(c)});
	}
	return s;
}

Schedule import_solution(const std::filesystem::path& path, const TaskSet& ts)
{
	std::ifstream f(path);
	if (!f)
		throw io::IoError("cannot read " + path.string());
	return read_solution(f, ts);
}

}
