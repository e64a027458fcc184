#include "rlsw/cli.hpp"

int main(int argc, char** argv) { return rlsw::cli_dispatch(argc, argv); }
