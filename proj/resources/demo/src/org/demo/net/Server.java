package org.demo.net;

import java.io.IOException;
import java.net.ServerSocket;
import java.net.Socket;
import java.util.ArrayList;
import java.util.List;

public class Server implements Runnable {
    private final ServerSocket listener;
    private final List<Socket> clients = new ArrayList<>();
    private volatile boolean running = true;  // cleared by stop()

    public Server(int port) throws IOException {
        listener = new ServerSocket(port);
    }

    @Override
    public void run() {
        // accept connections until stopped
        while (running) {
            try {
                Socket s = listener.accept();
                synchronized (clients) {
                    clients.add(s);
                }
            } catch (IOException e) {
                if (!running) {
                    // the listener was closed by stop()
                    return;
                }
                // log and keep serving
                e.printStackTrace();
            }
        }
    }

    public void stop() throws IOException {
        running = false;
        // closing the listener unblocks accept()
        listener.close();
        synchronized (clients) {
            // close every client connection
            for (Socket s : clients) {
                s.close();
            }
            clients.clear();
        }
    }

    public int clientCount() {
        synchronized (clients) {
            return clients.size();
        }
    }

    /*
    public void broadcast(String msg) {
        for (Socket s : clients) {
            s.getOutputStream().write(msg.getBytes());
        }
    }
    */

    // NOTE: this class is not meant to be subclassed.
    public static Server start(int port) throws IOException {
        Server server = new Server(port);
        // run the accept loop on a daemon thread
        Thread t = new Thread(server, "server");
        t.setDaemon(true);
        t.start();
        return server;
    }
}
