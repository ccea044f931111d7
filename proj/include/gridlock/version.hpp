#pragma once

#define GRIDLOCK_VERSION "0.1.0"
