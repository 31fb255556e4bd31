#pragma once

namespace bfdc {

// Command-line entry point. Subcommands: simulate, check-model, rates,
// lemma, sweep. Exit codes: 0 success, 1 model-validation failure,
// 2 numerical failure (blow-up, lost fronts), 3 configuration error.
int run_cli(int argc, const char* const* argv);

}  // namespace bfdc
