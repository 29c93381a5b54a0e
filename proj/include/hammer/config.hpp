#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "hammer/eval_queue.hpp"

namespace hammer {

// Pipeline configuration as a single JSON document. Every key is optional;
// unknown keys are rejected with InvalidConfig.
PipelineConfig parse_pipeline_config(std::string_view json_text);
PipelineConfig pipeline_config_from_json(const nlohmann::json& doc);
PipelineConfig load_pipeline_config(const std::string& path);
nlohmann::json to_json(const PipelineConfig& config);

std::string read_text_file(const std::string& path);

}  // namespace hammer
