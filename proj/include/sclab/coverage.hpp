#pragma once

#include <set>
#include <string>
#include <vector>

namespace sclab::coverage {

void mark(const std::string& op);
std::set<std::string> touched();
// every operation the library exposes, as "module.op"
const std::vector<std::string>& manifest();
std::vector<std::string> missing();

}  // namespace sclab::coverage

// cheap after the first hit at a call site
#define SCLAB_TOUCH(name)                                               \
    do {                                                                \
        static const bool sclab_touched_once_ = [] {                    \
            ::sclab::coverage::mark(name);                              \
            return true;                                                \
        }();                                                            \
        (void)sclab_touched_once_;                                      \
    } while (0)
