#include "treesched/tree.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace treesched {

TaskTree TaskTree::build(std::vector<NodeRecord> records) {
    const int n = static_cast<int>(records.size());
    if (n == 0) throw ValidationError("tree has no nodes");

    std::vector<NodeRecord> nodes(n);
    std::vector<NodeId> order;
    order.reserve(records.size());
    std::vector<bool> seen(n, false);
    for (NodeRecord& r : records) {
        if (r.id < 1 || r.id > n)
            throw ValidationError("node id " + std::to_string(r.id) +
                                  " outside dense range 1.." + std::to_string(n));
        if (seen[r.id - 1])
            throw ValidationError("duplicate node id " + std::to_string(r.id));
        seen[r.id - 1] = true;
        if (r.w < 0 || r.n < 0 || r.f < 0)
            throw ValidationError("negative weight on node " + std::to_string(r.id));
        if (r.parent < 0 || r.parent > n || r.parent == r.id)
            throw ValidationError("bad parent " + std::to_string(r.parent) + " on node " +
                                  std::to_string(r.id));
        r.children.clear();
        order.push_back(r.id);
        nodes[r.id - 1] = std::move(r);
    }

    TaskTree tree;
    tree.root_ = 0;
    for (const NodeRecord& r : nodes) {
        if (r.parent == 0) {
            if (tree.root_ != 0)
                throw ValidationError("multiple roots: nodes " + std::to_string(tree.root_) +
                                      " and " + std::to_string(r.id));
            tree.root_ = r.id;
        }
    }
    if (tree.root_ == 0) throw ValidationError("missing root (no node with parent 0)");

    // Children order follows the order the caller listed the nodes in.
    for (NodeId id : order)
        if (nodes[id - 1].parent != 0) nodes[nodes[id - 1].parent - 1].children.push_back(id);

    // Every node must reach the root; a node that does not lies on a cycle.
    std::vector<int> state(n, 0);  // 0 unvisited, 1 on path, 2 done
    for (NodeId start = 1; start <= n; ++start) {
        if (state[start - 1] != 0) continue;
        std::vector<NodeId> path;
        NodeId cur = start;
        while (cur != 0 && state[cur - 1] == 0) {
            state[cur - 1] = 1;
            path.push_back(cur);
            cur = nodes[cur - 1].parent;
        }
        if (cur != 0 && state[cur - 1] == 1)
            throw ValidationError("cycle through node " + std::to_string(cur));
        for (NodeId v : path) state[v - 1] = 2;
    }

    tree.inputs_.assign(n, 0);
    tree.total_work_ = 0;
    for (const NodeRecord& r : nodes) {
        tree.total_work_ += r.w;
        if (r.parent != 0) tree.inputs_[r.parent - 1] += r.f;
    }
    tree.nodes_ = std::move(nodes);
    return tree;
}

bool TaskTree::operator==(const TaskTree& other) const {
    if (size() != other.size() || root_ != other.root_) return false;
    for (int i = 0; i < size(); ++i) {
        const NodeRecord& a = nodes_[i];
        const NodeRecord& b = other.nodes_[i];
        if (a.parent != b.parent || a.children != b.children || a.w != b.w || a.n != b.n ||
            a.f != b.f)
            return false;
    }
    return true;
}

namespace {

bool parse_int(std::string_view tok, std::int64_t& out) {
    const char* first = tok.data();
    const char* last = tok.data() + tok.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

}  // namespace

TaskTree parse_tree(std::string_view text) {
    std::vector<NodeRecord> records;
    std::vector<int> line_of_id;  // parallel to records
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        std::string_view line = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos
                                                                               : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.remove_suffix(1);
        while (!line.empty() && (line.front() == ' ' || line.front() == '\t')) line.remove_prefix(1);
        if (line.empty() || line.front() == '#') continue;

        std::int64_t field[5];
        int nfields = 0;
        std::size_t i = 0;
        while (i < line.size()) {
            std::size_t j = line.find_first_of(" \t", i);
            if (j == std::string_view::npos) j = line.size();
            if (j > i) {
                if (nfields == 5 || !parse_int(line.substr(i, j - i), field[nfields]))
                    throw ParseError(line_no, "malformed line: expected `id parent w n f`");
                ++nfields;
            }
            i = j + 1;
        }
        if (nfields != 5)
            throw ParseError(line_no, "malformed line: expected 5 fields, got " +
                                          std::to_string(nfields));

        NodeRecord r;
        r.id = static_cast<NodeId>(field[0]);
        r.parent = static_cast<NodeId>(field[1]);
        r.w = field[2];
        r.n = field[3];
        r.f = field[4];
        if (field[0] < 1)
            throw ParseError(line_no, "node id must be >= 1");
        if (field[2] < 0 || field[3] < 0 || field[4] < 0)
            throw ParseError(line_no, "negative weight");
        records.push_back(std::move(r));
        line_of_id.push_back(line_no);
    }
    if (records.empty()) throw ParseError(line_no, "empty tree file");

    // Validate here so that errors carry the line of the offending node.
    const int n = static_cast<int>(records.size());
    std::vector<int> line_of(n + 1, 0);
    int root_line = 0;
    for (std::size_t k = 0; k < records.size(); ++k) {
        const NodeRecord& r = records[k];
        if (r.id > n)
            throw ParseError(line_of_id[k], "node id " + std::to_string(r.id) +
                                                " outside dense range 1.." + std::to_string(n));
        if (line_of[r.id] != 0)
            throw ParseError(line_of_id[k], "duplicate node id " + std::to_string(r.id));
        line_of[r.id] = line_of_id[k];
        if (r.parent == 0) {
            if (root_line != 0)
                throw ParseError(line_of_id[k], "multiple roots (first root at line " +
                                                    std::to_string(root_line) + ")");
            root_line = line_of_id[k];
        } else if (r.parent > n) {
            throw ParseError(line_of_id[k], "parent " + std::to_string(r.parent) +
                                                " does not exist");
        } else if (r.parent == r.id) {
            throw ParseError(line_of_id[k], "node is its own parent");
        }
    }
    if (root_line == 0) throw ParseError(line_no, "missing root (no node with parent 0)");

    std::vector<NodeId> parent_of(n + 1, 0);
    for (const NodeRecord& r : records) parent_of[r.id] = r.parent;
    std::vector<int> state(n + 1, 0);
    for (NodeId start = 1; start <= n; ++start) {
        if (state[start] != 0) continue;
        std::vector<NodeId> path;
        NodeId cur = start;
        while (cur != 0 && state[cur] == 0) {
            state[cur] = 1;
            path.push_back(cur);
            cur = parent_of[cur];
        }
        if (cur != 0 && state[cur] == 1)
            throw ParseError(line_of[cur], "cycle through node " + std::to_string(cur));
        for (NodeId v : path) state[v] = 2;
    }

    return TaskTree::build(std::move(records));
}

TaskTree load_tree(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open tree file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_tree(buf.str());
}

std::string serialize_tree(const TaskTree& tree) {
    std::string out;
    for (NodeId id = 1; id <= tree.size(); ++id) {
        const NodeRecord& r = tree.node(id);
        out += std::to_string(r.id);
        out += ' ';
        out += std::to_string(r.parent);
        out += ' ';
        out += std::to_string(r.w);
        out += ' ';
        out += std::to_string(r.n);
        out += ' ';
        out += std::to_string(r.f);
        out += '\n';
    }
    return out;
}

}  // namespace treesched
