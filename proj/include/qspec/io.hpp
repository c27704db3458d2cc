#pragma once

#include <string>
#include <string_view>

#include "qspec/model.hpp"
#include "qspec/quant.hpp"

namespace qspec {

enum class Format { text, json };

/// Parses and validates a document in the text grammar. Throws ParseError
/// with a line/column location, or ValidationError naming the system.
SpecDocument parse_spec(std::string_view text);

/// Parses the JSON mirror of the text grammar.
SpecDocument parse_spec_json(std::string_view text);

/// Parses a single label in the surface syntax of the given structure.
Label parse_label(std::string_view text, const LabelStructure& ls);

/// Reads a file, choosing the JSON reader for names ending in ".json".
SpecDocument load_document(const std::string& path);

/// Canonical rendering: equal documents serialize to identical bytes.
std::string serialize(const SpecDocument& doc, Format format);

/// Throws ValidationError with the first violation of any system.
void validate_document(const SpecDocument& doc);

std::string distance_table_json(const DistanceTable& table, const std::vector<std::string>& left_names,
                                const std::vector<std::string>& right_names);

} // namespace qspec
