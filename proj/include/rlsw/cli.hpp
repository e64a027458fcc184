#pragma once

namespace rlsw {

/// Entry point of the `rlsw` command line tool. Returns the exit status.
int cli_dispatch(int argc, char** argv);

}  // namespace rlsw
