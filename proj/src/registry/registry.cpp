#include "vpg/registry.hpp"

#include "vpg/error.hpp"

#include <set>

namespace vpg {

std::string_view to_string(Access a) {
    switch (a) {
    case Access::Item: return "item";
    case Access::List: return "list";
    case Access::Tree: return "tree";
    }
    return "item";
}

std::optional<Access> access_from_string(std::string_view s) {
    if (s == "item") {
        return Access::Item;
    }
    if (s == "list") {
        return Access::List;
    }
    if (s == "tree") {
        return Access::Tree;
    }
    return std::nullopt;
}

const StateField* ComponentDescriptor::state_field(std::string_view field) const {
    for (const auto& f : state_schema) {
        if (f.name == field) {
            return &f;
        }
    }
    return nullptr;
}

namespace {

void check_ports(const ComponentDescriptor& d, const std::vector<PortDescriptor>& ports, bool inputs) {
    for (std::size_t i = 0; i < ports.size(); ++i) {
        const auto& p = ports[i];
        if (p.index != static_cast<int>(i)) {
            throw Error(Errc::InvalidArgument, d.type_id + ": port indices must be contiguous from 0", d.type_id);
        }
        if (!inputs && (p.optional || p.default_value)) {
            throw Error(Errc::InvalidArgument, d.type_id + ": outputs carry no optional flag or default", d.type_id);
        }
        if (p.default_value && !literal_to_value(*p.default_value, p.kind)) {
            throw Error(Errc::InvalidArgument, d.type_id + ": default of " + p.name + " does not match its kind",
                        d.type_id);
        }
    }
}

} // namespace

Registry::Registry(std::vector<ComponentDescriptor> descriptors) {
    std::sort(descriptors.begin(), descriptors.end(),
              [](const auto& a, const auto& b) { return a.type_id < b.type_id; });
    for (std::size_t i = 0; i < descriptors.size(); ++i) {
        const auto& d = descriptors[i];
        if (d.type_id.empty() || d.nickname.empty()) {
            throw Error(Errc::InvalidArgument, "component needs a type id and nickname", d.type_id);
        }
        if (!by_id_.emplace(d.type_id, i).second) {
            throw Error(Errc::InvalidArgument, "duplicate type id " + d.type_id, d.type_id);
        }
        check_ports(d, d.inputs, true);
        check_ports(d, d.outputs, false);
        if (d.is_slider()) {
            const std::set<std::string> want = {"decimals", "max", "min", "value"};
            std::set<std::string> have;
            for (const auto& f : d.state_schema) {
                have.insert(f.name);
            }
            if (have != want || d.outputs.size() != 1) {
                throw Error(Errc::InvalidArgument, d.type_id + ": sliders have one output and {min,max,value,decimals}",
                            d.type_id);
            }
        }
    }
    descriptors_ = std::move(descriptors);
}

const ComponentDescriptor* Registry::find(std::string_view type_id) const {
    auto it = by_id_.find(type_id);
    return it == by_id_.end() ? nullptr : &descriptors_[it->second];
}

} // namespace vpg
