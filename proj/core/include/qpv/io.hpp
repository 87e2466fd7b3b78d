#pragma once

#include <string>

#include "qpv/hidden.hpp"
#include "qpv/protocol.hpp"
#include "qpv/search.hpp"

namespace qpv {

/// Matrix literal: {"rows": int, "cols": int, "entries": [[re, im], ...]}
/// in row-major order. Shared by every file format in the library.
std::string matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const std::string& text);

/// Projector syntax: "bloch:c1,c2,c3" or "vec:re(x),im(x),re(y),im(y)".
QubitProjector parse_projector(const std::string& text);
std::string format_projector(const QubitProjector& p);

/// Instance file: {"U": matrix literal, "w_dim": n, "v1_dim": n,
/// "v2_dim": n, "w": [[re, im], ...], "P": projector syntax}.
HiddenInstance instance_from_json(const std::string& text);
std::string instance_to_json(const HiddenInstance& inst);
HiddenInstance load_instance(const std::string& path);

/// Strategy file: {"dims": {"A","B","C","D"}, "psi": [[re, im], ...],
/// "U": {projector syntax: matrix literal}, "V": matrix literal,
/// "decoders": {projector syntax: {"M0","M1","N0","N1"}}} (optional).
CheatingStrategy strategy_from_json(const std::string& text);
std::string strategy_to_json(const CheatingStrategy& s);
CheatingStrategy load_strategy(const std::string& path);

std::string run_report_to_json(const RunReport& report);
std::string assessment_to_json(const CheatAssessment& assessment);
std::string verdict_to_json(const HiddenVerdict& verdict);
std::string search_result_to_json(const SearchResult& result);
std::string scan_report_to_json(const ScanReport& report);
std::string hidden_pairs_to_json(const std::vector<HiddenPair>& pairs);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace qpv
