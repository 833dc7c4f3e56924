package org.demo.net;

import java.io.IOException;
import java.net.Socket;

/**
 * A blocking client for the line protocol.
 * <p>
 * Callers must call {@link #close()} when done.
 */
public class Client {
    private static final int TIMEOUT_MS = 3000;  // connect and read timeout
    private static final int RETRIES = 3;  // attempts before giving up

    private Socket socket;
    private final String host;
    private final int port;

    public Client(String host, int port) {
        this.host = host;
        this.port = port;
    }

    public void connect() throws IOException {
        IOException last = null;
        // retry on failure
        for (int attempt = 0; attempt < RETRIES; attempt++) {
            try {
                socket = new Socket(host, port);
                socket.setSoTimeout(TIMEOUT_MS);
                return;
            } catch (IOException e) {
                // remember the error and try again
                last = e;
            }
        }
        // all attempts failed
        throw last;
    }

    public boolean isConnected() {
        // a closed socket still reports it was connected
        return socket != null && !socket.isClosed();
    }

    public void send(String message) throws IOException {
        if (!isConnected()) {
            // connect lazily on first use
            connect();
        }
        // write the message followed by a newline
        socket.getOutputStream().write((message + "\n").getBytes("UTF-8"));
    }

    // Use send() for normal traffic; this is for the handshake only.
    void sendRaw(byte[] data) throws IOException {
        socket.getOutputStream().write(data);
    }

    public void close() {
        if (socket == null) {
            return;
        }
        try {
            socket.close();
        } catch (IOException e) {
            // ignore
        }
        // let the socket be collected
        socket = null;
    }
}
