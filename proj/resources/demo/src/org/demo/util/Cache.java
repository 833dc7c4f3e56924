package org.demo.util;

import java.util.HashMap;
import java.util.Map;

/**
 * A size-bounded map that evicts the oldest entry.
 *
 * @param <K> key type
 * @param <V> value type
 */
public class Cache<K, V> {
    private final Map<K, V> entries = new HashMap<>();
    private final Map<K, Long> stamps = new HashMap<>();
    private final int capacity;  // maximum number of entries
    private long clock;  // logical time of the last access
    private int hits;
    private int misses;

    public Cache(int capacity) {
        if (capacity < 1) {
            // a cache without room is a programming error
            throw new IllegalArgumentException("capacity must be positive");
        }
        this.capacity = capacity;
    }

    public V get(K key) {
        V v = entries.get(key);
        if (v == null) {
            misses++;
            return null;
        }
        // refresh the access time
        stamps.put(key, ++clock);
        hits++;
        return v;
    }

    public void put(K key, V value) {
        if (entries.size() >= capacity && !entries.containsKey(key)) {
            // make room first
            evictOldest();
        }
        // cache the value
        entries.put(key, value);
        stamps.put(key, ++clock);
    }

    private void evictOldest() {
        K oldest = null;
        long best = Long.MAX_VALUE;  // smallest stamp seen
        // find the least recently used key
        for (Map.Entry<K, Long> e : stamps.entrySet()) {
            if (e.getValue() < best) {
                best = e.getValue();
                oldest = e.getKey();
            }
        }
        if (oldest != null) {
            entries.remove(oldest);
            stamps.remove(oldest);
        }
    }

    public double hitRate() {
        int total = hits + misses;
        // avoid dividing by zero before the first lookup
        if (total == 0) {
            return 0.0;
        }
        return (double) hits / total;
    }

    // Call clear() between test cases to reset the statistics too.
    public void clear() {
        entries.clear();
        stamps.clear();
        hits = 0;  // reset statistics
        misses = 0;
    }

    @SuppressWarnings("unused")
    // TODO remove once the old API is gone
    private int legacySize() {
        return entries.size();
    }
}
