package org.demo.app;

import java.io.File;
import java.util.ArrayList;
import java.util.List;

public class JobRunner {
    private final List<Thread> workers = new ArrayList<>();
    private int exitCode;  // 0 on success

    public int run(File input, File output) throws InterruptedException {
        Thread job = new Thread(() -> process(input, output));
        job.start();
        // let the job finish
        job.join();
        return exitCode;
    }

    private void process(File input, File output) {
        if (!input.canRead()) {
            exitCode = 1;  // unreadable input
            return;
        }
        // do nothing
        if (input.length() == 0) {
            return;
        }
        // copy input to output
        output.delete();
        input.renameTo(output);
    }

    public void startAll(int n) {
        // spawn n workers
        for (int i = 0; i < n; i++) {
            Thread t = new Thread(this::work);
            workers.add(t);
            t.start();
        }
    }

    private void work() {
        // sleep briefly to yield to other threads
        try {
            Thread.sleep(10);
        } catch (InterruptedException e) {
            // restore the interrupt flag
            Thread.currentThread().interrupt();
        }
    }

    public void joinAll() throws InterruptedException {
        // wait for every worker
        for (Thread t : workers) {
            t.join();
        }
        workers.clear();  // allow reuse
    }

    // workers.forEach(Thread::interrupt);
    public void cancel() {
        // interrupt all workers
        for (Thread t : workers) {
            t.interrupt();
        }
    }
}
