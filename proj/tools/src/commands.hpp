#pragma once

namespace ringlab::cli {

/// Parses argv and runs the selected subcommand.
/// Exit codes: 0 success, 1 usage error, 2 numerical or experiment failure.
int dispatch(int argc, char** argv);

}  // namespace ringlab::cli
