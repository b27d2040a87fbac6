#include "h2net/cli.hpp"

int main(int argc, char** argv) {
    return h2net::run_cli(argc, argv);
}
