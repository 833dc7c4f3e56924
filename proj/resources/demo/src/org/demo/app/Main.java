package org.demo.app;

import java.io.File;
import java.util.List;

/**
 * Command line entry point.
 * Usage: demo [--verbose] input output
 */
public class Main {
    private static boolean verbose;  // set by --verbose

    public static void main(String[] args) throws Exception {
        // parse the options
        int i = 0;
        while (i < args.length && args[i].startsWith("--")) {
            if (args[i].equals("--verbose")) {
                verbose = true;
            }
            i++;
        }
        if (args.length - i < 2) {
            // not enough arguments, so print usage and quit
            usage();
            return;
        }
        File input = new File(args[i]);
        File output = new File(args[i + 1]);
        // create some test data
        if (!input.exists()) {
            input.createNewFile();
        }
        // run the job and report its exit status
        int status = new JobRunner().run(input, output);
        if (verbose) {
            System.err.println("status " + status);  // debug output
        }
        System.exit(status);
    }

    private static void usage() {
        // print usage to stderr
        System.err.println("usage: demo [--verbose] input output");
    }

    // Do not call this from library code; it exits the JVM.
    static void die(String message) {
        System.err.println(message);
        System.exit(2);
    }

    static int sum(List<Integer> xs) {
        int total = 0;
        // add up all numbers
        for (int x : xs) {
            total += x;
        }
        return total;
    }
}
