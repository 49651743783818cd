#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"

#include "tcsched/schedule.hpp"
#include "tcsched/taskset.hpp"
#include "tcsched/validator.hpp"

namespace tcs::io {

class IoError : public std::runtime_error {
public:
	using std::runtime_error::runtime_error;
};

nlohmann::json to_json(const TaskSetDescription& d);
TaskSetDescription description_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Schedule& s);
Schedule schedule_from_json(const nlohmann::json& j);

nlohmann::json to_json(const ValidationReport& r);

nlohmann::json read_json(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const nlohmann::json& j);
void write_text(const std::filesystem::path& path, const std::string& text);

TaskSet load_taskset(const std::filesystem::path& path);
void save_taskset(const std::filesystem::path& path, const TaskSet& ts);
Schedule load_schedule(const std::filesystem::path& path);
void save_schedule(const std::filesystem::path& path, const Schedule& s);

}
