#ifndef MIXBND_IO_HPP
#define MIXBND_IO_HPP

#include <string>

#include "mixbnd/alphabet.hpp"
#include "mixbnd/dag.hpp"
#include "mixbnd/model.hpp"
#include "mixbnd/recovery.hpp"
#include "mixbnd/runs.hpp"

namespace mixbnd {

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

// {"n": 3, "edges": [[0, 1], [1, 2]]}
Dag parse_dag(const std::string& text);
std::string dag_to_json(const Dag& g);

// {"graph": {...}, "k": 2, "weights": [...], "cpts": [{"vertex": v,
// "parents": [...], "tables": [[P_0(v=1|mask) ...], ...]}]}. Table entry m is
// indexed by the parent mask (bit i = i-th parent, ascending).
MixtureModel parse_model(const std::string& text);
std::string model_to_json(const MixtureModel& m);

// Recovered model plus a "diagnostics" section.
std::string recovered_to_json(const RecoveredModel& r, const RunCollection& coll);

// Header v0,...,v{n-1} with an optional trailing u column.
SampleSet parse_samples_csv(const std::string& text, int n);
std::string samples_to_csv(const SampleSet& s);

// Like the binary model file with "d" and per-source lists of value rows.
DaryModel parse_dary_model(const std::string& text);
std::string dary_model_to_json(const DaryModel& m);

DarySamples parse_dary_csv(const std::string& text, int n, int d);
std::string dary_samples_to_csv(const DarySamples& s);

// Encodings, tree edges with their candidate alignment variables, and labels.
std::string dump_runs(const RunCollection& coll);

}  // namespace mixbnd

#endif
