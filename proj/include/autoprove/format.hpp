#pragma once

#include <functional>
#include <optional>
#include <string>

#include "autoprove/automaton.hpp"

namespace autoprove {

/// Maps a number system name to its tape domain. Returning nullopt defers
/// the tape's alphabet: it is then inferred from the symbols that actually
/// appear in the transition table (used while a number system's own
/// definition files are being loaded). Unknown names should throw.
using DomainResolver = std::function<std::optional<TapeDomain>(const std::string& name)>;

/// Parses the textual automaton format:
///
///   msd_2 {-1,1}          header: one number system name or braced alphabet per tape
///   0 1                   state line: "<state> <output>"
///   0 * -> 1              transition: one symbol (or * wildcard) per tape, then target
///   ...
///
/// A file consisting of the single word "true" or "false" denotes the
/// corresponding constant automaton. States must be declared densely from 0
/// (the initial state). Wildcards expand over the tape alphabet; transitions
/// that disagree on their target are rejected.
Automaton parse_automaton_text(const std::string& text, const DomainResolver& resolve);

/// Canonical serialization of a deterministic automaton whose initial state
/// is 0 (constants serialize as "true"/"false"). Transitions are emitted per
/// state in ascending code order; no wildcards are produced.
std::string write_automaton_text(const Automaton& a);

/// Graphviz rendering. States show their index (index/output when any output
/// is outside {0,1}); accepting states are double circles; an unlabeled
/// arrow marks the initial state. Edges between the same states are merged
/// with comma-separated labels.
std::string write_graphviz(const Automaton& a, const std::string& name);

}  // namespace autoprove
