x:=1; str:=''; while x<3 {str:='x:=x+1;'.str; reflect(str);}; $
