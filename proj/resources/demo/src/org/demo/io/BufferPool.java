/*
 * Copyright 2014 The Demo Authors.
 * Licensed under the Apache License, Version 2.0.
 */
package org.demo.io;

import java.nio.ByteBuffer;
import java.util.ArrayDeque;
import java.util.Deque;

/**
 * Keeps a small pool of direct buffers so that hot paths do not allocate.
 */
public class BufferPool {
    private static final int DEFAULT_SIZE = 8192;  // bytes per buffer
    private static final int MAX_POOLED = 64;  // upper bound on idle buffers

    private final Deque<ByteBuffer> idle = new ArrayDeque<>();
    private int created;  // number of buffers ever allocated

    // ------------------------------------------------------------------

    public synchronized ByteBuffer acquire() {
        // reuse an idle buffer when one is available
        ByteBuffer buf = idle.pollFirst();
        if (buf == null) {
            // the pool is empty, so allocate a fresh one
            buf = ByteBuffer.allocateDirect(DEFAULT_SIZE);
            created++;
        }
        return buf;
    }

    public synchronized void release(ByteBuffer buf) {
        if (buf == null) {
            return;  // nothing to give back
        }
        // clear buffer
        for (int i = 0; i < buf.capacity(); i++) {
            buf.put(i, (byte) 0);
        }
        buf.clear();
        if (idle.size() >= MAX_POOLED) {
            // drop the buffer and let the collector reclaim it
            return;
        }
        idle.addLast(buf);
    }

    public synchronized int idleCount() {
        return idle.size();
    }

    // TODO: shrink the pool when it stays idle for a long time
    public synchronized void trim() {
        // keep at most half of the idle buffers
        while (idle.size() > MAX_POOLED / 2) {
            idle.pollLast();
        }
        // idle.clear();
    }

    public int created() {
        return created;  // only read by tests, so no lock
    }
}
