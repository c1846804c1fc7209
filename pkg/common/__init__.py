# Copyright (c) 2024.
