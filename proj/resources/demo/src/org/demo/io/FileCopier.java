package org.demo.io;

import java.io.File;
import java.io.FileInputStream;
import java.io.FileOutputStream;
import java.io.IOException;

public class FileCopier {
    private static final int CHUNK = 4096;  // copy granularity in bytes

    //CHECKSTYLE:OFF
    public static long copy(File from, File to) throws IOException {
        //CHECKSTYLE:ON
        if (!from.exists()) {
            // Unable to find the source file.
            return -1;
        }
        // create the parent directory
        File parent = to.getParentFile();
        if (parent != null && !parent.exists()) {
            parent.mkdirs();  // may already exist
        }
        long total = 0;
        byte[] buf = new byte[CHUNK];
        FileInputStream in = new FileInputStream(from);
        FileOutputStream out = new FileOutputStream(to);
        try {
            int n;
            // copy the array
            while ((n = in.read(buf)) > 0) {
                out.write(buf, 0, n);
                total += n;
            }
        } finally {
            // close both streams even when the copy fails
            in.close();
            out.close();
        }
        return total;
    }

    /**
     * Copies every file of a directory, not recursing into subdirectories.
     */
    public static int copyAll(File dir, File target) throws IOException {
        int count = 0;
        File[] files = dir.listFiles();
        if (files == null) {
            return 0;  // not a directory
        }
        for (File f : files) {
            // skip directories
            if (f.isDirectory()) {
                continue;
            }
            copy(f, new File(target, f.getName()));
            count++;
        }
        // System.out.println("copied " + count);
        return count;
    }
}
