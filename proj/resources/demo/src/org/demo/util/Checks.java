package org.demo.util;

public final class Checks {

    // =====================================================================
    // Argument checks
    // =====================================================================

    public static <T> T notNull(T value, String name) {
        if (value == null) {
            // fail fast with the parameter name
            throw new NullPointerException(name + " must not be null");
        }
        return value;
    }

    public static int inRange(int value, int lo, int hi) {
        // bounds are inclusive
        if (value < lo || value > hi) {
            throw new IllegalArgumentException(value + " not in [" + lo + ", " + hi + "]");
        }
        return value;
    }

    public static void state(boolean ok, String message) {
        if (!ok) {
            throw new IllegalStateException(message);  // should never happen
        }
    }

    // =====================================================================
    // Index checks
    // =====================================================================

    public static int index(int i, int size) {
        // check the bounds first
        if (i < 0 || i >= size) {
            throw new IndexOutOfBoundsException("index " + i + ", size " + size);
        }
        return i;
    }

    public static void positive(long n) {
        // zero is not positive
        if (n <= 0) {
            throw new IllegalArgumentException("expected a positive number: " + n);
        }
    }

    /*
     * Before 2.0 these checks returned booleans; see the migration notes.
     */
    public static boolean legacyCheck(Object o) {
        return o != null;
    }

    // 设置默认值
    public static int orDefault(Integer value, int fallback) {
        return value == null ? fallback : value;
    }
}
