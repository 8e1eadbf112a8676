#pragma once

#include "pfw/error.hpp"
#include "pfw/intlat.hpp"
#include "pfw/encode.hpp"
#include "pfw/lawton.hpp"
#include "pfw/filter.hpp"
#include "pfw/transfer.hpp"
#include "pfw/verify.hpp"
#include "pfw/cascade.hpp"
#include "pfw/quincunx.hpp"
#include "pfw/io.hpp"
#include "pfw/config.hpp"
