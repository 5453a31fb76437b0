#include "testcalc/io.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace testcalc::io {

namespace {

using json = nlohmann::ordered_json;

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("malformed JSON: ") + e.what());
  }
}

std::string token(const json& v, const std::string& where) {
  if (v.is_string()) {
    auto s = v.get<std::string>();
    if (s.empty()) throw InputError(where + ": empty id");
    return s;
  }
  if (v.is_number_integer()) return v.dump();
  throw InputError(where + ": ids must be strings or integers");
}

behaviors::BehaviorSet id_list(const json& doc, const std::string& key, const std::string& where) {
  if (!doc.contains(key)) throw InputError("missing \"" + key + "\"");
  const auto& list = doc.at(key);
  if (!list.is_array()) throw InputError(where + " must be an array");
  behaviors::BehaviorSet out;
  for (const auto& v : list) {
    auto id = token(v, where);
    if (!out.insert(id).second) throw InputError(where + ": duplicate id '" + id + "'");
  }
  return out;
}

}  // namespace

behaviors::SptModel parse_spt_json(std::string_view text) {
  const auto doc = parse_json(text);
  if (!doc.is_object()) throw InputError("SPT document must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (key != "universe" && key != "S" && key != "P" && key != "T" && key != "tests")
      throw InputError("unknown key \"" + key + "\"");
  }
  auto universe = id_list(doc, "universe", "\"universe\"");
  auto s = id_list(doc, "S", "\"S\"");
  auto p = id_list(doc, "P", "\"P\"");
  auto t = id_list(doc, "T", "\"T\"");
  std::optional<behaviors::TestMap> tests;
  if (doc.contains("tests")) {
    const auto& obj = doc.at("tests");
    if (!obj.is_object()) throw InputError("\"tests\" must be an object");
    tests.emplace();
    for (const auto& [name, _] : obj.items())
      (*tests)[name] = id_list(obj, name, "test \"" + name + "\"");
  }
  return behaviors::SptModel::make(std::move(universe), std::move(s), std::move(p), std::move(t), std::move(tests));
}

statechart::Statechart parse_chart_json(std::string_view text) {
  const auto doc = parse_json(text);
  if (!doc.is_object()) throw InputError("statechart document must be a JSON object");
  statechart::Statechart chart;

  if (!doc.contains("blobs") || !doc.at("blobs").is_object()) throw InputError("\"blobs\" must be an object");
  for (const auto& [id, kids] : doc.at("blobs").items()) {
    if (id.empty()) throw InputError("empty blob id");
    if (!kids.is_array()) throw InputError("children of blob \"" + id + "\" must be an array");
    statechart::Blob blob{id, {}};
    for (const auto& k : kids) blob.children.push_back(token(k, "children of \"" + id + "\""));
    chart.blobs.push_back(std::move(blob));
  }

  if (!doc.contains("root")) throw InputError("missing \"root\"");
  chart.root = token(doc.at("root"), "\"root\"");

  if (doc.contains("transitions")) {
    const auto& list = doc.at("transitions");
    if (!list.is_array()) throw InputError("\"transitions\" must be an array");
    for (std::size_t i = 0; i < list.size(); ++i) {
      const auto& t = list[i];
      const std::string where = "transition " + std::to_string(i);
      if (!t.is_object() || !t.contains("dst")) throw InputError(where + ": needs \"dst\"");
      statechart::Transition tr;
      if (t.contains("src") && !t.at("src").is_null()) tr.src = token(t.at("src"), where + " src");
      tr.dst = token(t.at("dst"), where + " dst");
      if (t.contains("label") && !t.at("label").is_null()) {
        if (!t.at("label").is_string()) throw InputError(where + ": label must be a string");
        tr.label = t.at("label").get<std::string>();
      }
      chart.transitions.push_back(std::move(tr));
    }
  }
  return chart;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace testcalc::io
