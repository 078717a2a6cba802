#include "xml_doc.hpp"

#include <cctype>

#include "tsnbound/errors.hpp"

namespace tsnb::xml {

namespace {

class Cursor {
public:
    explicit Cursor(std::string_view text) : text_(text) {}

    bool done() const { return pos_ >= text_.size(); }
    char peek() const { return text_[pos_]; }
    char take() { return text_[pos_++]; }

    bool starts_with(std::string_view prefix) const {
        return text_.substr(pos_, prefix.size()) == prefix;
    }
    void skip(std::size_t n) { pos_ += n; }

    void skip_space() {
        while (!done() && std::isspace(static_cast<unsigned char>(peek()))) take();
    }

    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError("xml: " + what + " at offset " + std::to_string(pos_));
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;
};

bool name_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == ':' ||
           c == '.';
}

std::string read_name(Cursor& cur) {
    std::string name;
    while (!cur.done() && name_char(cur.peek())) name += cur.take();
    if (name.empty()) cur.fail("expected a name");
    return name;
}

std::string decode_entities(Cursor& cur, char quote) {
    std::string out;
    while (!cur.done() && cur.peek() != quote) {
        char c = cur.take();
        if (c != '&') {
            out += c;
            continue;
        }
        std::string entity;
        while (!cur.done() && cur.peek() != ';') entity += cur.take();
        if (cur.done()) cur.fail("unterminated entity");
        cur.take();
        if (entity == "amp") out += '&';
        else if (entity == "lt") out += '<';
        else if (entity == "gt") out += '>';
        else if (entity == "quot") out += '"';
        else if (entity == "apos") out += '\'';
        else cur.fail("unknown entity '&" + entity + ";'");
    }
    if (cur.done()) cur.fail("unterminated attribute value");
    cur.take(); // closing quote
    return out;
}

void skip_misc(Cursor& cur) {
    while (true) {
        cur.skip_space();
        if (cur.starts_with("<!--")) {
            cur.skip(4);
            while (!cur.done() && !cur.starts_with("-->")) cur.take();
            if (cur.done()) cur.fail("unterminated comment");
            cur.skip(3);
        } else if (cur.starts_with("<?")) {
            cur.skip(2);
            while (!cur.done() && !cur.starts_with("?>")) cur.take();
            if (cur.done()) cur.fail("unterminated processing instruction");
            cur.skip(2);
        } else {
            return;
        }
    }
}

Element parse_element(Cursor& cur) {
    if (cur.done() || cur.take() != '<') cur.fail("expected '<'");
    Element el;
    el.name = read_name(cur);

    while (true) {
        cur.skip_space();
        if (cur.done()) cur.fail("unterminated element '" + el.name + "'");
        if (cur.starts_with("/>")) {
            cur.skip(2);
            return el;
        }
        if (cur.peek() == '>') {
            cur.take();
            break;
        }
        std::string key = read_name(cur);
        cur.skip_space();
        if (cur.done() || cur.take() != '=') cur.fail("expected '=' after attribute name");
        cur.skip_space();
        if (cur.done()) cur.fail("expected attribute value");
        char quote = cur.take();
        if (quote != '"' && quote != '\'') cur.fail("attribute value must be quoted");
        el.attributes.emplace_back(std::move(key), decode_entities(cur, quote));
    }

    // Children until the matching close tag; stray text is skipped.
    while (true) {
        while (!cur.done() && cur.peek() != '<') cur.take();
        if (cur.done()) cur.fail("missing close tag for '" + el.name + "'");
        if (cur.starts_with("<!--") || cur.starts_with("<?")) {
            skip_misc(cur);
            continue;
        }
        if (cur.starts_with("</")) {
            cur.skip(2);
            std::string close = read_name(cur);
            if (close != el.name) cur.fail("mismatched close tag '" + close + "'");
            cur.skip_space();
            if (cur.done() || cur.take() != '>') cur.fail("malformed close tag");
            return el;
        }
        el.children.push_back(parse_element(cur));
    }
}

void escape_into(std::string& out, const std::string& value) {
    for (char c : value) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
}

void write_element(std::string& out, const Element& el, int depth) {
    out.append(static_cast<std::size_t>(depth) * 4, ' ');
    out += '<';
    out += el.name;
    for (const auto& [key, value] : el.attributes) {
        out += ' ';
        out += key;
        out += "=\"";
        escape_into(out, value);
        out += '"';
    }
    if (el.children.empty()) {
        out += "/>\n";
        return;
    }
    out += ">\n";
    for (const auto& child : el.children) write_element(out, child, depth + 1);
    out.append(static_cast<std::size_t>(depth) * 4, ' ');
    out += "</";
    out += el.name;
    out += ">\n";
}

} // namespace

const std::string* Element::attr(std::string_view key) const {
    for (const auto& [k, v] : attributes) {
        if (k == key) return &v;
    }
    return nullptr;
}

void Element::set_attr(std::string_view key, std::string value) {
    for (auto& [k, v] : attributes) {
        if (k == key) {
            v = std::move(value);
            return;
        }
    }
    attributes.emplace_back(std::string(key), std::move(value));
}

Element parse(std::string_view text) {
    Cursor cur(text);
    // Byte-order mark, declaration, comments.
    if (cur.starts_with("\xEF\xBB\xBF")) cur.skip(3);
    skip_misc(cur);
    if (cur.done()) throw ParseError("xml: empty document");
    Element root = parse_element(cur);
    skip_misc(cur);
    if (!cur.done()) throw ParseError("xml: trailing content after root element");
    return root;
}

std::string write(const Element& root) {
    std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    write_element(out, root, 0);
    return out;
}

} // namespace tsnb::xml
