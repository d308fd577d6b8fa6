#include "cli.hpp"

int main(int argc, char** argv) {
    return gemcap::cli::dispatch(argc, argv);
}
