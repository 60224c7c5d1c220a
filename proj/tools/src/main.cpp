#include "commands.hpp"

int main(int argc, char** argv) { return ringlab::cli::dispatch(argc, argv); }
