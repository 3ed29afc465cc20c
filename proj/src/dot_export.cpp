#include "forsage/dot_export.hpp"

#include <sstream>

namespace forsage {

namespace {

    // Raw text to the body of a DOT quoted string.
    std::string escape(const std::string& s)
    {
        std::string out;
        for (char c : s) {
            if (c == '"' || c == '\\')
                out += '\\';
            out += c;
        }
        return out;
    }

    // Wraps an already escaped body; label bodies keep their \n breaks.
    std::string quote(const std::string& body) { return "\"" + body + "\""; }

    std::string id_of(const Address& a) { return quote(escape(a.value)); }

    std::string short_address(const Address& a)
    {
        const auto& v = a.value;
        if (v.size() <= 14)
            return escape(v);
        return escape(v.substr(0, 8) + ".." + v.substr(v.size() - 4));
    }

    std::string node_label(const ContractState& state, UserId id, MatrixKind m, Level l)
    {
        const auto& u = state.user(id);
        std::string label = short_address(u.address);
        if (id == state.owner())
            label += "\\nowner";
        label += "\\nreinvest=" + std::to_string(u.reinvest_count(m, l));
        if (m == MatrixKind::X3) {
            label += "\\nreferrals=" + std::to_string(u.x3_at(l).referrals.size());
        } else {
            const auto& s = u.x4_at(l);
            label += "\\nfirst=" + std::to_string(s.first_level.size()) + " second=" + std::to_string(s.second_level.size());
            if (s.closed_part)
                label += "\\nclosedPart=" + short_address(state.user(*s.closed_part).address);
        }
        if (u.is_blocked(m, l))
            label += "\\nblocked";
        label += "\\npartners=" + std::to_string(u.partners_count);
        return label;
    }

} // namespace

std::string export_dot(const ContractState& state, const std::optional<Address>& focus, MatrixKind matrix, Level level)
{
    std::optional<UserId> root;
    if (focus)
        root = state.require(*focus);

    const std::size_t n = state.user_count();
    std::vector<std::vector<UserId>> children(n);
    for (UserId id = 0; id < n; ++id) {
        const auto& u = state.user(id);
        if (!u.is_active(matrix, level) || id == state.owner())
            continue;
        if (auto ref = u.slot_referrer(matrix, level); ref && *ref != id)
            children[*ref].push_back(id);
    }

    std::vector<UserId> nodes;
    if (root) {
        // Referrer pointers can in principle loop in X4, so track visits.
        std::vector<bool> seen(n, false);
        std::vector<UserId> stack { *root };
        seen[*root] = true;
        while (!stack.empty()) {
            const UserId id = stack.back();
            stack.pop_back();
            nodes.push_back(id);
            for (auto it = children[id].rbegin(); it != children[id].rend(); ++it) {
                if (!seen[*it]) {
                    seen[*it] = true;
                    stack.push_back(*it);
                }
            }
        }
    } else {
        for (UserId id = 0; id < n; ++id) {
            if (state.user(id).is_active(matrix, level))
                nodes.push_back(id);
        }
    }
    std::vector<bool> in_graph(n, false);
    for (UserId id : nodes)
        in_graph[id] = true;

    const std::string name = "forsage_" + std::string(to_string(matrix)) + "_level" + std::to_string(level.value());
    std::ostringstream out;
    out << "digraph " << name << " {\n";
    out << "  rankdir=TB;\n";
    out << "  node [shape=box, fontname=\"Helvetica\", fontsize=10];\n";
    for (UserId id : nodes) {
        const auto& u = state.user(id);
        out << "  " << id_of(u.address) << " [label=" << quote(node_label(state, id, matrix, level));
        if (u.is_blocked(matrix, level))
            out << ", style=filled, fillcolor=\"lightgray\"";
        out << "];\n";
    }
    for (UserId id : nodes) {
        for (UserId c : children[id]) {
            if (in_graph[c])
                out << "  " << id_of(state.user(id).address) << " -> " << id_of(state.user(c).address) << ";\n";
        }
    }

    if (root) {
        const auto& u = state.user(*root);
        const std::string prefix = "slot:" + escape(u.address.value) + ":";
        out << "  subgraph cluster_slots {\n";
        out << "    rank=same;\n";
        out << "    label=" << quote(short_address(u.address) + " " + std::string(to_string(matrix)) + " slots") << ";\n";
        for (int l = Level::kMin; l <= Level::kMax; ++l) {
            const Level lv(l);
            out << "    " << quote(prefix + std::to_string(l)) << " [";
            if (u.is_active(matrix, lv)) {
                out << "shape=box, label=" << quote("L" + std::to_string(l) + "\\nreinvest=" + std::to_string(u.reinvest_count(matrix, lv)) + (u.is_blocked(matrix, lv) ? "\\nblocked" : ""));
            } else {
                out << "shape=circle, width=0.3, label=" << quote(std::to_string(l));
            }
            out << "];\n";
        }
        for (int l = Level::kMin; l < Level::kMax; ++l) {
            out << "    " << quote(prefix + std::to_string(l)) << " -> " << quote(prefix + std::to_string(l + 1))
                << " [style=invis];\n";
        }
        out << "  }\n";
        out << "  " << id_of(u.address) << " -> " << quote(prefix + std::to_string(level.value()))
            << " [style=dashed, arrowhead=none];\n";
    }
    out << "}\n";
    return out.str();
}

} // namespace forsage
