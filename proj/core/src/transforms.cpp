#include "treesched/transforms.hpp"

#include <algorithm>
#include <charconv>

namespace treesched {

TransformMap TransformMap::compose(const TransformMap& first, const TransformMap& second) {
    if (second.original_size != first.transformed_size)
        throw std::invalid_argument("transform maps do not chain");
    TransformMap out;
    out.original_size = first.original_size;
    out.transformed_size = second.transformed_size;
    out.added_nodes = first.added_nodes;
    out.added_nodes.insert(out.added_nodes.end(), second.added_nodes.begin(),
                           second.added_nodes.end());
    return out;
}

namespace {

std::vector<NodeRecord> copy_records(const TaskTree& tree) {
    std::vector<NodeRecord> records;
    records.reserve(tree.size());
    for (NodeId id = 1; id <= tree.size(); ++id) records.push_back(tree.node(id));
    return records;
}

}  // namespace

TransformResult eliminate_execution_files(const TaskTree& tree) {
    std::vector<NodeRecord> records = copy_records(tree);
    TransformMap map;
    map.original_size = tree.size();

    NodeId next = static_cast<NodeId>(tree.size());
    for (NodeId id = 1; id <= tree.size(); ++id) {
        if (records[id - 1].n == 0) continue;
        NodeRecord leaf;
        leaf.id = ++next;
        leaf.parent = id;
        leaf.w = 0;
        leaf.n = 0;
        leaf.f = records[id - 1].n;
        records[id - 1].n = 0;
        map.added_nodes.push_back(leaf.id);
        records.push_back(std::move(leaf));
    }
    map.transformed_size = static_cast<int>(records.size());
    return {TaskTree::build(std::move(records)), std::move(map)};
}

TransformResult to_reduction_tree(const TaskTree& tree) {
    for (NodeId id = 1; id <= tree.size(); ++id)
        if (tree.node(id).n != 0)
            throw std::invalid_argument(
                "to_reduction_tree requires n = 0 everywhere; run "
                "eliminate_execution_files first");

    std::vector<NodeRecord> records = copy_records(tree);
    TransformMap map;
    map.original_size = tree.size();

    NodeId next = static_cast<NodeId>(tree.size());
    for (NodeId id = 1; id <= tree.size(); ++id) {
        if (tree.is_leaf(id)) continue;
        const MemUnits deficit = tree.node(id).f - tree.inputs(id);
        if (deficit <= 0) continue;  // a zero-size leaf would be weightless
        NodeRecord leaf;
        leaf.id = ++next;
        leaf.parent = id;
        leaf.w = 0;
        leaf.n = 0;
        leaf.f = deficit;
        map.added_nodes.push_back(leaf.id);
        records.push_back(std::move(leaf));
    }
    map.transformed_size = static_cast<int>(records.size());
    return {TaskTree::build(std::move(records)), std::move(map)};
}

bool is_reduction_tree(const TaskTree& tree) {
    for (NodeId id = 1; id <= tree.size(); ++id)
        if (tree.is_inner(id) && tree.node(id).f > tree.inputs(id)) return false;
    return true;
}

Schedule lift_schedule(const Schedule& sched, const TransformMap& map) {
    if (static_cast<int>(sched.start.size()) != map.transformed_size)
        throw std::invalid_argument("schedule does not match the transform map");
    Schedule lifted(sched.processors, map.original_size);
    for (NodeId id = 1; id <= map.original_size; ++id)
        lifted.assign(id, sched.start_of(id), sched.proc_of(id));
    return lifted;
}

std::string serialize_transform_map(const TransformMap& map) {
    std::string out;
    for (NodeId id = 1; id <= map.transformed_size; ++id) {
        out += std::to_string(id);
        out += ' ';
        out += std::to_string(map.origin(id));
        out += '\n';
    }
    return out;
}

TransformMap parse_transform_map(std::string_view text) {
    TransformMap map;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.remove_suffix(1);
        if (line.empty() || line.front() == '#') continue;
        std::size_t space = line.find(' ');
        std::int64_t transformed = 0, original = 0;
        auto ok = [&](std::string_view tok, std::int64_t& out) {
            auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
            return ec == std::errc() && p == tok.data() + tok.size();
        };
        if (space == std::string_view::npos || !ok(line.substr(0, space), transformed) ||
            !ok(line.substr(space + 1), original))
            throw ParseError(line_no, "malformed mapping line");
        if (transformed != map.transformed_size + 1)
            throw ParseError(line_no, "mapping ids must be dense and ascending");
        map.transformed_size = static_cast<int>(transformed);
        if (original == 0) {
            map.added_nodes.push_back(static_cast<NodeId>(transformed));
        } else {
            if (original != transformed)
                throw ParseError(line_no, "retained nodes must keep their id");
            if (!map.added_nodes.empty())
                throw ParseError(line_no, "retained node after an added one");
            map.original_size = static_cast<int>(original);
        }
    }
    return map;
}

}  // namespace treesched
