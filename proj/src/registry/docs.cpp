#include "vpg/registry.hpp"

#include "vpg/error.hpp"

#include "vpg/json_literal.hpp"

#include <sstream>

namespace vpg {

namespace {

std::string state_line(const ComponentDescriptor& d) {
    if (d.state_schema.empty()) {
        return "none";
    }
    std::string out;
    for (const auto& f : d.state_schema) {
        if (!out.empty()) {
            out += ", ";
        }
        out += f.name + "=" + format_number(f.default_value);
    }
    return out;
}

void render_port(std::ostringstream& out, const PortDescriptor& p, bool input) {
    out << "#### " << (input ? "Input " : "Output ") << p.index << "\n";
    out << "- Name: " << p.name << "\n";
    out << "- Description: " << p.description << "\n";
    out << "- Type: " << to_string(p.kind) << "\n";
    out << "- Access: " << to_string(p.access) << "\n";
    if (input) {
        out << "- If optional: " << (p.optional ? "true" : "false") << "\n";
        out << "- Default value: " << (p.default_value ? format_literal(*p.default_value) : "none") << "\n";
    } else {
        out << "- Data structure: " << p.data_structure_note << "\n";
    }
    out << "\n";
}

// Line cursor over the Markdown document.
class Lines {
public:
    explicit Lines(std::string_view text) {
        std::size_t start = 0;
        while (start <= text.size()) {
            const auto nl = text.find('\n', start);
            const auto end = nl == std::string_view::npos ? text.size() : nl;
            lines_.push_back(text.substr(start, end - start));
            if (nl == std::string_view::npos) {
                break;
            }
            start = nl + 1;
        }
    }

    void skip_blank() {
        while (pos_ < lines_.size() && lines_[pos_].empty()) {
            ++pos_;
        }
    }
    bool done() {
        skip_blank();
        return pos_ >= lines_.size();
    }
    std::string_view peek() {
        skip_blank();
        return pos_ < lines_.size() ? lines_[pos_] : std::string_view{};
    }
    std::string_view next() {
        skip_blank();
        if (pos_ >= lines_.size()) {
            fail("unexpected end of document");
        }
        return lines_[pos_++];
    }
    std::string field(std::string_view key) {
        const std::string_view line = next();
        const std::string prefix = "- " + std::string(key) + ": ";
        if (line.substr(0, prefix.size()) != prefix) {
            --pos_;
            fail("expected field '" + std::string(key) + "'");
        }
        return std::string(line.substr(prefix.size()));
    }
    void expect(std::string_view exact) {
        if (next() != exact) {
            --pos_;
            fail("expected '" + std::string(exact) + "'");
        }
    }
    [[noreturn]] void fail(const std::string& what) const {
        throw Error(Errc::MalformedDocument, "line " + std::to_string(pos_ + 1) + ": " + what);
    }

private:
    std::vector<std::string_view> lines_;
    std::size_t pos_ = 0;
};

bool parse_bool(Lines& in, const std::string& s) {
    if (s == "true") {
        return true;
    }
    if (s != "false") {
        in.fail("expected true or false, got '" + s + "'");
    }
    return false;
}

PortDescriptor parse_port(Lines& in, bool input, int index) {
    in.expect(std::string(input ? "#### Input " : "#### Output ") + std::to_string(index));
    PortDescriptor p;
    p.index = index;
    p.name = in.field("Name");
    p.description = in.field("Description");
    const std::string kind = in.field("Type");
    const auto k = kind_from_string(kind);
    if (!k) {
        in.fail("unknown type '" + kind + "'");
    }
    p.kind = *k;
    const std::string access = in.field("Access");
    const auto a = access_from_string(access);
    if (!a) {
        in.fail("unknown access '" + access + "'");
    }
    p.access = *a;
    if (input) {
        p.optional = parse_bool(in, in.field("If optional"));
        const std::string def = in.field("Default value");
        if (def != "none") {
            p.default_value = parse_literal(def);
            if (!p.default_value) {
                in.fail("bad default literal '" + def + "'");
            }
        }
    } else {
        p.data_structure_note = in.field("Data structure");
    }
    return p;
}

std::vector<PortDescriptor> parse_ports(Lines& in, bool input) {
    in.expect(input ? "### Inputs" : "### Outputs");
    std::vector<PortDescriptor> ports;
    if (in.peek() == "(none)") {
        in.next();
        return ports;
    }
    const std::string_view head = input ? "#### Input " : "#### Output ";
    while (!in.done() && in.peek().substr(0, head.size()) == head) {
        ports.push_back(parse_port(in, input, static_cast<int>(ports.size())));
    }
    return ports;
}

std::vector<StateField> parse_state(Lines& in, const std::string& text) {
    std::vector<StateField> out;
    if (text == "none") {
        return out;
    }
    std::string_view rest = text;
    while (!rest.empty()) {
        const auto comma = rest.find(", ");
        const std::string_view item = rest.substr(0, comma);
        const auto eq = item.find('=');
        if (eq == std::string_view::npos) {
            in.fail("bad state entry '" + std::string(item) + "'");
        }
        const auto value = parse_literal(item.substr(eq + 1));
        if (!value || !literal_as_number(*value)) {
            in.fail("bad state default in '" + std::string(item) + "'");
        }
        out.push_back({std::string(item.substr(0, eq)), *literal_as_number(*value)});
        rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 2);
    }
    return out;
}

} // namespace

std::string render_record(const ComponentDescriptor& d) {
    std::ostringstream out;
    out << "## " << d.type_id << "\n\n";
    out << "- Name: " << d.name << "\n";
    out << "- Nickname: " << d.nickname << "\n";
    out << "- Category: " << d.category << "\n";
    out << "- Description: " << d.description << "\n";
    out << "- Default Preview Display: " << (d.default_preview ? "true" : "false") << "\n";
    out << "- State: " << state_line(d) << "\n\n";
    out << "### Inputs\n\n";
    if (d.inputs.empty()) {
        out << "(none)\n\n";
    }
    for (const auto& p : d.inputs) {
        render_port(out, p, true);
    }
    out << "### Outputs\n\n";
    if (d.outputs.empty()) {
        out << "(none)\n\n";
    }
    for (const auto& p : d.outputs) {
        render_port(out, p, false);
    }
    return out.str();
}

std::string export_docs(const Registry& registry) {
    std::string out;
    for (const auto& d : registry.all()) {
        out += render_record(d);
    }
    return out;
}

std::vector<ComponentDescriptor> parse_docs(std::string_view markdown) {
    Lines in(markdown);
    std::vector<ComponentDescriptor> out;
    while (!in.done()) {
        const std::string_view head = in.next();
        if (head.substr(0, 3) != "## ") {
            in.fail("expected '## <type id>'");
        }
        ComponentDescriptor d;
        d.type_id = std::string(head.substr(3));
        d.name = in.field("Name");
        d.nickname = in.field("Nickname");
        d.category = in.field("Category");
        d.description = in.field("Description");
        d.default_preview = parse_bool(in, in.field("Default Preview Display"));
        d.state_schema = parse_state(in, in.field("State"));
        d.inputs = parse_ports(in, true);
        d.outputs = parse_ports(in, false);
        out.push_back(std::move(d));
    }
    return out;
}

std::string export_catalog_json(const Registry& registry) {
    auto catalog = nlohmann::json::array();
    for (const auto& d : registry.all()) {
        nlohmann::json c;
        c["type_id"] = d.type_id;
        c["name"] = d.name;
        c["nickname"] = d.nickname;
        c["category"] = d.category;
        c["description"] = d.description;
        c["default_preview"] = d.default_preview;
        c["state_schema"] = nlohmann::json::array();
        for (const auto& f : d.state_schema) {
            c["state_schema"].push_back({{"name", f.name}, {"default", f.default_value}});
        }
        for (const bool input : {true, false}) {
            auto ports = nlohmann::json::array();
            for (const auto& p : input ? d.inputs : d.outputs) {
                nlohmann::json j{{"index", p.index},
                                 {"name", p.name},
                                 {"description", p.description},
                                 {"kind", std::string(to_string(p.kind))},
                                 {"access", std::string(to_string(p.access))}};
                if (input) {
                    j["optional"] = p.optional;
                    j["default"] = p.default_value ? literal_to_json(*p.default_value) : nlohmann::json(nullptr);
                } else {
                    j["data_structure_note"] = p.data_structure_note;
                }
                ports.push_back(std::move(j));
            }
            c[input ? "inputs" : "outputs"] = std::move(ports);
        }
        catalog.push_back(std::move(c));
    }
    return catalog.dump(2);
}

} // namespace vpg
