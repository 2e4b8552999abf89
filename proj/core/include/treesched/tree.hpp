#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace treesched {

using NodeId = std::int32_t;    // 1-based, 0 means "no node"
using TimeUnits = std::int64_t;
using MemUnits = std::int64_t;

/// One task of the tree: processing time w, execution-file size n,
/// output-file size f. Children links are derived from the parent fields.
struct NodeRecord {
    NodeId id = 0;
    NodeId parent = 0;  // 0 for the root
    std::vector<NodeId> children;
    TimeUnits w = 0;
    MemUnits n = 0;
    MemUnits f = 0;
};

class ParseError : public std::runtime_error {
public:
    ParseError(int line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    int line() const { return line_; }

private:
    int line_ = 0;
};

class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Immutable in-tree of tasks. Node ids are dense 1..size(); every node
/// except the root has a parent, and a task may run only after all of
/// its children completed. Safe to share across threads once built.
class TaskTree {
public:
    TaskTree() = default;

    /// Validates and links the records; children lists are rebuilt from the
    /// parent fields (records given in id order keep their children order).
    /// Throws ValidationError on duplicate/missing ids, multiple roots,
    /// cycles or negative weights.
    static TaskTree build(std::vector<NodeRecord> records);

    int size() const { return static_cast<int>(nodes_.size()); }
    bool empty() const { return nodes_.empty(); }
    NodeId root() const { return root_; }

    const NodeRecord& node(NodeId id) const { return nodes_[check(id) - 1]; }
    NodeId parent(NodeId id) const { return node(id).parent; }
    const std::vector<NodeId>& children(NodeId id) const { return node(id).children; }
    bool is_leaf(NodeId id) const { return node(id).children.empty(); }
    bool is_inner(NodeId id) const { return !is_leaf(id); }

    /// Total size of the input files of node id: sum of f over its children.
    MemUnits inputs(NodeId id) const { return inputs_[check(id) - 1]; }

    /// Memory needed while node id is processed: inputs(id) + n + f.
    MemUnits node_memory(NodeId id) const {
        const NodeRecord& r = node(id);
        return inputs(id) + r.n + r.f;
    }

    TimeUnits total_work() const { return total_work_; }

    bool operator==(const TaskTree& other) const;

private:
    NodeId check(NodeId id) const {
        if (id < 1 || id > size())
            throw std::out_of_range("unknown node id " + std::to_string(id));
        return id;
    }

    std::vector<NodeRecord> nodes_;  // index id-1
    std::vector<MemUnits> inputs_;
    NodeId root_ = 0;
    TimeUnits total_work_ = 0;
};

/// Parses the text tree format: one node per line, `id parent w n f`,
/// parent 0 denoting the root, '#' starting a comment line.
TaskTree parse_tree(std::string_view text);

/// Reads and parses a tree file from disk.
TaskTree load_tree(const std::string& path);

/// Emits the tree in the text format, nodes in ascending id order.
std::string serialize_tree(const TaskTree& tree);

}  // namespace treesched
