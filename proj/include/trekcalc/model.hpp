#pragma once

#include <string>

#include "trekcalc/covariance.hpp"
#include "trekcalc/dag.hpp"

namespace trekcalc {

struct ModelFile {
    Dag dag;
    ParamPoint point;
};

// One statement per line: `vertex <id>`, `edge <i> <j>`,
// `param <i> <j> <rational>`, `omega <m> <rational>`; `#` starts a comment.
// Vertices are auto-declared by edges in first-appearance order unless
// explicit `vertex` lines fix the order.
ModelFile parse_model(const std::string& text);

ModelFile load_model_file(const std::string& path);

}  // namespace trekcalc
