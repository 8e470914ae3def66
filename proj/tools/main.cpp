#include "qnc/cli.hpp"

int main(int argc, char** argv) { return qnc::run_cli(argc, argv); }
