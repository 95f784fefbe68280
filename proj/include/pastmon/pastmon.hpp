#pragma once

#include "pastmon/behavior.hpp"
#include "pastmon/errors.hpp"
#include "pastmon/monitor.hpp"
#include "pastmon/network.hpp"
#include "pastmon/options.hpp"
#include "pastmon/syntax.hpp"
#include "pastmon/value.hpp"
