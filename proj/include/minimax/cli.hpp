#pragma once

namespace minimax {

/// Exit codes: 0 all requested certificates pass, 1 a certificate fails,
/// 2 usage or IO error, 3 numerical failure.
int cli_main(int argc, char** argv);

}  // namespace minimax
