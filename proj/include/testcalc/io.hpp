#pragma once

#include <string>
#include <string_view>

#include "testcalc/behaviors.hpp"
#include "testcalc/statechart.hpp"

// Readers for the JSON input documents. Schema problems raise InputError.
namespace testcalc::io {

// {"universe": [...], "S": [...], "P": [...], "T": [...], "tests": {"name": [...]}}
// Ids may be strings or integers; a repeated id within one list is an error.
behaviors::SptModel parse_spt_json(std::string_view text);

// {"blobs": {"id": ["child", ...]}, "root": "id",
//  "transitions": [{"src": "id" | null, "dst": "id", "label": "tok"}]}
statechart::Statechart parse_chart_json(std::string_view text);

std::string read_file(const std::string& path);

}  // namespace testcalc::io
