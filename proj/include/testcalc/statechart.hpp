#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "testcalc/error.hpp"
#include "testcalc/graph.hpp"

namespace testcalc::statechart {

// A transition without a source is an initial marker; it belongs to the
// blob that contains its destination and carries no label.
struct Transition {
  std::optional<std::string> src;
  std::string dst;
  std::string label;

  bool is_initial() const noexcept { return !src.has_value(); }
  friend bool operator==(const Transition&, const Transition&) = default;
};

struct Blob {
  std::string id;
  std::vector<std::string> children;
};

// Raw chart as read from input; nothing is checked until validate().
// Blobs mentioned only as children are leaves.
struct Statechart {
  std::vector<Blob> blobs;
  std::string root;
  std::vector<Transition> transitions;
};

struct Diagnostic {
  enum class Kind {
    MultipleParents,
    ContainmentCycle,
    NotUnderRoot,
    UnknownBlob,
    BadTransition,
    MissingInitial,
    ExtraInitial,
  };
  Kind kind;
  std::string blob;
  std::string message;
};

std::string_view to_string(Diagnostic::Kind kind);

// Empty when the chart is valid.
std::vector<Diagnostic> validate(const Statechart& chart);

class InvalidChart : public InputError {
 public:
  explicit InvalidChart(std::vector<Diagnostic> diagnostics);
  const std::vector<Diagnostic>& diagnostics() const noexcept { return diagnostics_; }

 private:
  std::vector<Diagnostic> diagnostics_;
};

class NondeterministicTransition : public InputError {
 public:
  NondeterministicTransition(const std::string& state, const std::string& label)
      : InputError("state '" + state + "' has two transitions on '" + label + "'") {}
};

class NoTransition : public AnalysisError {
 public:
  NoTransition(const std::string& state, const std::string& label)
      : AnalysisError("no transition from '" + state + "' on '" + label + "'"), state_(state), label_(label) {}
  const std::string& state() const noexcept { return state_; }
  const std::string& label() const noexcept { return label_; }

 private:
  std::string state_;
  std::string label_;
};

struct FsmTransition {
  std::string src;
  std::string label;
  std::string dst;
  friend bool operator==(const FsmTransition&, const FsmTransition&) = default;
};

// Deterministic flat machine. make() rejects unknown endpoints, an initial
// state outside the state set and two transitions sharing (src, label).
class FlatFsm {
 public:
  static FlatFsm make(std::vector<std::string> states, std::string initial, std::vector<FsmTransition> transitions);

  const std::vector<std::string>& states() const noexcept { return states_; }
  const std::string& initial() const noexcept { return initial_; }
  const std::vector<FsmTransition>& transitions() const noexcept { return transitions_; }
  // For machines produced by flatten(): index of the chart transition each
  // flat transition came from. Empty otherwise.
  const std::vector<std::size_t>& provenance() const noexcept { return provenance_; }

  const FsmTransition* step(const std::string& state, const std::string& label) const;

 private:
  friend FlatFsm flatten(const Statechart& chart);
  FlatFsm() = default;

  std::vector<std::string> states_;
  std::string initial_;
  std::vector<FsmTransition> transitions_;
  std::vector<std::size_t> provenance_;
};

// States are the leaf blobs in pre-order from the root. A transition out of a
// composite leaves from each of its leaf descendants; a transition into a
// composite enters the leaf reached by following initial markers down.
// Throws InvalidChart, NondeterministicTransition.
FlatFsm flatten(const Statechart& chart);

// Visited states, starting with the initial one. Throws NoTransition.
std::vector<std::string> run(const FlatFsm& fsm, const std::vector<std::string>& labels);

struct FsmGraph {
  graph::ProgramGraph graph;
  // Labels of every transition folded into an edge, in transition order.
  graph::EdgeLabels labels;
};

FsmGraph fsm_to_graph(const FlatFsm& fsm);

}  // namespace testcalc::statechart
