#include "loglap/cli.hpp"

int main(int argc, char** argv) { return loglap::main_entry(argc, argv); }
