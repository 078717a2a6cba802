#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace tsnb::xml {

// Minimal XML document model: elements with ordered attributes and child
// elements. Text content is ignored on parse; the network vocabulary does
// not use it.
struct Element {
    std::string name;
    std::vector<std::pair<std::string, std::string>> attributes;
    std::vector<Element> children;

    const std::string* attr(std::string_view key) const;
    void set_attr(std::string_view key, std::string value);
};

// Parses a well-formed document (declaration, comments, nested elements,
// the five named entities) and returns the root element. Throws
// tsnb::ParseError on malformed input.
Element parse(std::string_view text);

// Serializes with a declaration line and 4-space indentation.
std::string write(const Element& root);

} // namespace tsnb::xml
