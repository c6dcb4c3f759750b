#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "plp/ast.hpp"

namespace plp {

struct Diagnostic {
    SourceSpan span;
    std::string message;
};

// The call relation and its derived orders over the declared procedures.
// reaches() is the transitive (not reflexive) closure of the direct relation;
// a procedure is recursive exactly when it reaches itself.
class CallGraph {
public:
    std::vector<std::string> procs;                          // declaration order
    std::map<std::string, std::set<std::string>> direct;     // syntactic call edges
    std::vector<std::vector<std::string>> sccs;              // topological order

    bool reaches(const std::string& a, const std::string& b) const;             // a ⪰ b
    bool mutuallyRecursive(const std::string& a, const std::string& b) const;   // a ∼ b
    bool strictlyAbove(const std::string& a, const std::string& b) const;       // a ≻ b
    bool isRecursive(const std::string& p) const { return mutuallyRecursive(p, p); }

    std::map<std::string, std::set<std::string>> reach_;     // filled by buildCallGraph
};

CallGraph buildCallGraph(const Program& p);

// All side conditions of the grammar: declared variables, known procedures
// with matching arity, pairwise-disjoint call arguments, parameter scoping,
// no unbound integer variables, and gate/angle arity.
std::vector<Diagnostic> checkWellFormed(const Program& p);

struct HalfResult {
    bool ok = false;
    std::vector<Diagnostic> violations;
};

// A program is recursively halving when every (mutually) recursive call site
// passes at least one argument containing a first- or second-half node.
HalfResult checkHalf(const Program& p, const CallGraph& cg);

struct WidthResult {
    std::map<std::string, int> perProc;
    int width = 0;
};

// Number of (mutually) recursive call sites per procedure: sequences add,
// branches take the maximum.
WidthResult width(const Program& p, const CallGraph& cg);

struct Verdict {
    bool wellFormed = false;
    bool isHalf = false;
    int width = 0;
    bool isPLP = false;
    std::vector<Diagnostic> diagnostics;
};

// Aggregate verdict; expects a surface or desugared program (desugars itself).
Verdict verdict(const Program& p);

std::string formatDiagnostic(const std::string& file, const Diagnostic& d);

}  // namespace plp
