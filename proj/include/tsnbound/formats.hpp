#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "tsnbound/network.hpp"

namespace tsnb {

enum class DocumentKind { PhysicalXml, OutputPortJson };

// Strict parsing rejects unknown fields; lenient parsing keeps them in the
// model's extras maps and re-emits them on write.
enum class ParseMode { Strict, Lenient };

struct NetworkDocument {
    DocumentKind kind;
    std::variant<PhysicalNetwork, OutputPortNetwork> payload;

    const PhysicalNetwork& physical() const { return std::get<PhysicalNetwork>(payload); }
    const OutputPortNetwork& output_port() const { return std::get<OutputPortNetwork>(payload); }
};

// XML physical-network format. Quantities always carry explicit units.
PhysicalNetwork parse_xml(std::string_view text, ParseMode mode = ParseMode::Strict);

// The XML vocabulary holds one rate-latency / one token bucket per element;
// multi-piece curves coming from conversions are reduced (service: first
// canonical piece, arrival: last canonical piece) with a warning.
std::string write_xml(const PhysicalNetwork& net, std::vector<std::string>* warnings = nullptr);

// JSON output-port format. Bare numbers resolve against the unit defined in
// the closest scope: explicit suffix > object-level unit > network-level unit.
OutputPortNetwork parse_json(std::string_view text, ParseMode mode = ParseMode::Strict);

std::string write_json(const OutputPortNetwork& net);

// Detects the format from content when `kind` is absent ('<' starts XML).
NetworkDocument parse_document(std::string_view text, std::optional<DocumentKind> kind = {},
                               ParseMode mode = ParseMode::Strict);

// Converts to the target form; converting to the same kind just normalizes.
NetworkDocument convert(const NetworkDocument& doc, DocumentKind target,
                        std::vector<std::string>* warnings = nullptr);

std::string write_document(const NetworkDocument& doc, std::vector<std::string>* warnings = nullptr);

} // namespace tsnb
