#pragma once

#include <ostream>
#include <span>
#include <string>

namespace remrec {

// Exit codes: 0 success, 1 usage or I/O error, 2 no feasible proposal or an
// ambiguous decode. Errors are JSON lines on `err`.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace remrec
