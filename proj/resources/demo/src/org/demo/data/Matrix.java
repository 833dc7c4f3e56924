package org.demo.data;

/**
 * Dense row-major matrix of doubles.
 */
public class Matrix {
    private final int rows;  // number of rows
    private final int cols;  // number of columns
    private final double[] data;

    public Matrix(int rows, int cols) {
        this.rows = rows;
        this.cols = cols;
        this.data = new double[rows * cols];
    }

    public double get(int r, int c) {
        return data[r * cols + c];  // row-major offset
    }

    public void set(int r, int c, double v) {
        data[r * cols + c] = v;
    }

    public Matrix multiply(Matrix other) {
        if (cols != other.rows) {
            // the inner dimensions must agree
            throw new IllegalArgumentException("shape mismatch");
        }
        Matrix out = new Matrix(rows, other.cols);
        // compute each cell as a dot product
        for (int i = 0; i < rows; i++) {
            for (int j = 0; j < other.cols; j++) {
                double sum = 0;
                for (int k = 0; k < cols; k++) {
                    sum += get(i, k) * other.get(k, j);
                }
                out.set(i, j, sum);
            }
        }
        return out;
    }

    public Matrix transpose() {
        Matrix t = new Matrix(cols, rows);
        // swap rows and columns
        for (int i = 0; i < rows; i++) {
            for (int j = 0; j < cols; j++) {
                t.set(j, i, get(i, j));
            }
        }
        return t;
    }

    public static Matrix identity(int n) {
        Matrix m = new Matrix(n, n);
        // set the diagonal to one
        for (int i = 0; i < n; i++) {
            m.set(i, i, 1.0);
        }
        return m;
    }

    public double trace() {
        // only square matrices have a trace
        if (rows != cols) {
            throw new IllegalStateException("not square");
        }
        double t = 0;
        for (int i = 0; i < rows; i++) {
            t += get(i, i);
        }
        return t;
    }

    public void fill(double v) {
        // overwrite every cell
        java.util.Arrays.fill(data, v);
    }

    // for (int i = 0; i < data.length; i++) data[i] = 0;
    public void zero() {
        fill(0.0);
    }

    // ----------------------------------------------------------------

    @Override
    public String toString() {
        StringBuilder sb = new StringBuilder();
        // print one row per line
        for (int i = 0; i < rows; i++) {
            for (int j = 0; j < cols; j++) {
                sb.append(get(i, j)).append(j + 1 < cols ? " " : "\n");
            }
        }
        return sb.toString();
    }
}
