#include "coho/common.hpp"

// implementation pending
