#pragma once

#define GROUPPROF_VERSION "0.1.0"
