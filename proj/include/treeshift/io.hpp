#pragma once

// Line-oriented text documents. The first significant line is the kind tag;
// `#` starts a comment.

#include <filesystem>
#include <string>
#include <string_view>
#include <variant>

#include "treeshift/ca.hpp"
#include "treeshift/core.hpp"
#include "treeshift/fta.hpp"
#include "treeshift/rabin.hpp"
#include "treeshift/sft.hpp"

namespace treeshift {

/// Unreadable or missing input file.
class FileError : public Error
{
public:
	using Error::Error;
};

struct PatternDocument
{
	unsigned arity;
	Alphabet alphabet;
	Pattern pattern;
};

using Document = std::variant<RabinAutomaton, FiniteTreeAutomaton, SftDescription,
                              CellularAutomaton, PatternDocument, MooreColoring>;

Document parse_document(std::string_view text);
Document read_document(const std::filesystem::path& path);

/// Canonical form: fixed line order, bundles and rules sorted.
std::string write_document(const Document& doc);

/// "rabin", "fta", ...
std::string_view kind_name(const Document& doc);

} // namespace treeshift
