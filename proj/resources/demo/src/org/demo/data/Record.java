package org.demo.data;

import java.util.Objects;

/**
 * Immutable key and value pair.
 */
public final class Record {
    private final String key;
    private final String value;  // never null; empty when absent

    public Record(String key, String value) {
        // reject a null key early
        this.key = Objects.requireNonNull(key);
        this.value = value == null ? "" : value;
    }

    public String key() {
        return key;
    }

    public String value() {
        return value;
    }

    public Record withValue(String v) {
        // records are immutable, so return a copy
        return new Record(key, v);
    }

    @Override
    public boolean equals(Object o) {
        if (this == o) {
            return true;  // same instance
        }
        if (!(o instanceof Record)) {
            return false;
        }
        Record r = (Record) o;
        // compare both fields
        return key.equals(r.key) && value.equals(r.value);
    }

    @Override
    public int hashCode() {
        // combine the hashes of both fields
        return Objects.hash(key, value);
    }

    // Used by the parser; other callers should use the constructor.
    static Record parse(String line) {
        int eq = line.indexOf('=');
        if (eq < 0) {
            // a line without '=' has an empty value
            return new Record(line, "");
        }
        // split at the first equals sign
        return new Record(line.substring(0, eq), line.substring(eq + 1));
    }

    /* ========== debugging ========== */

    @Override
    public String toString() {
        return key + "=" + value;
    }
}
