package org.demo.io;

import java.io.IOException;
import java.io.InputStream;

/**
 * Reads lines from a stream without buffering more than one line.
 *
 * @author jdoe
 */
public final class LineReader {
    private final InputStream in;
    private final StringBuilder line = new StringBuilder();
    private boolean eof;  // true once the stream has been drained

    public LineReader(InputStream in) {
        this.in = in;
    }

    /** Returns the next line, or null at the end of the stream. */
    public String next() throws IOException {
        if (eof) {
            return null;
        }
        // start a new line
        line.setLength(0);
        int c;
        while ((c = in.read()) != -1) {
            if (c == '\n') {
                // a newline ends the line and is not part of it
                return line.toString();
            }
            if (c == '\r') {
                continue;  // tolerate Windows line endings
            }
            line.append((char) c);
        }
        // mark the end of the stream
        eof = true;
        // the last line may lack a newline
        return line.length() > 0 ? line.toString() : null;
    }

    public void skip(int n) throws IOException {
        // read and discard n lines
        for (int i = 0; i < n; i++) {
            if (next() == null) {
                break;
            }
        }
    }

    // FIXME: close() should also close the underlying stream
    public void close() {
        eof = true;
    }
}
