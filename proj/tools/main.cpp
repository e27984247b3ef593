// SPDX-License-Identifier: Apache-2.0

#include "mixedpolar/cli.hpp"

int main(int argc, char** argv) { return mixedpolar::run_main(argc, argv); }
